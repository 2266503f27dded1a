#include <cmath>
#include <sstream>

#include "../csv.hpp"
#include "lecdc/milp.hpp"
#include "lecdc/solvers.hpp"

namespace lecdc::milp {

namespace {

constexpr std::size_t kTermsPerLine = 8;

bool valid_lp_char(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    switch (c) {
        case '_': case '.': case '!': case '"': case '#': case '$': case '%': case '&': case '(':
        case ')': case '/': case ',': case ';': case '?': case '@': case '\'': case '{': case '}':
        case '|': case '~':
            return true;
        default:
            return false;
    }
}

/// LP names may not start with a digit, a period or the letter e followed
/// by a digit (read as an exponent by some parsers).
std::string lp_name(const std::string& raw) {
    std::string out;
    out.reserve(raw.size() + 2);
    for (char c : raw) out += valid_lp_char(c) ? c : '_';
    bool bad_start = out.empty() || std::isdigit(static_cast<unsigned char>(out[0])) || out[0] == '.' ||
                     ((out[0] == 'e' || out[0] == 'E') && out.size() > 1 &&
                      std::isdigit(static_cast<unsigned char>(out[1])));
    if (bad_start) out = "x_" + out;
    return out;
}

std::string num(double v) { return csv::format_number(v); }

void write_terms(std::ostringstream& out, const Model& model, const LinExpr& expr) {
    if (expr.empty()) {
        // LP needs at least one term; reference the first variable with a
        // zero coefficient.
        out << " 0 " << lp_name(model.var(0).name);
        return;
    }
    std::size_t n = 0;
    for (const auto& [index, coeff] : expr.terms()) {
        if (n > 0 && n % kTermsPerLine == 0) out << "\n  ";
        out << (coeff < 0 ? " - " : (n == 0 ? " " : " + "));
        double mag = std::abs(coeff);
        if (mag != 1.0) out << num(mag) << ' ';
        out << lp_name(model.var(index).name);
        ++n;
    }
}

const char* sense_text(Sense s) {
    switch (s) {
        case Sense::le: return "<=";
        case Sense::ge: return ">=";
        case Sense::eq: return "=";
    }
    return "=";
}

}  // namespace

std::string emit_lp(const Model& model) {
    std::ostringstream out;
    out << "\\ lecdc model: " << model.name() << '\n';
    out << "\\ variables: " << model.var_count() << ", binaries: " << model.binary_count()
        << ", constraints: " << model.constraint_count() << '\n';
    if (model.objective().constant() != 0.0)
        out << "\\ objective constant: " << num(model.objective().constant()) << '\n';
    if (model.var_count() == 0) {
        out << "Minimize\n obj:\nSubject To\nEnd\n";
        return out.str();
    }

    out << "Minimize\n obj:";
    write_terms(out, model, model.objective());
    out << "\nSubject To\n";
    std::size_t row = 0;
    for (const auto& c : model.constraints()) {
        std::string name = c.name.empty() ? "c" + std::to_string(row) : c.name;
        out << ' ' << lp_name(name) << ':';
        write_terms(out, model, c.expr);
        out << ' ' << sense_text(c.sense) << ' ' << num(c.rhs) << '\n';
        ++row;
    }

    out << "Bounds\n";
    for (const auto& v : model.vars()) {
        const std::string name = lp_name(v.name);
        if (v.kind == VarKind::binary) {
            if (v.lower == v.upper) out << ' ' << name << " = " << num(v.lower) << '\n';
            continue;
        }
        if (v.lower == v.upper) {
            out << ' ' << name << " = " << num(v.lower) << '\n';
        } else if (std::isinf(v.lower) && std::isinf(v.upper)) {
            out << ' ' << name << " free\n";
        } else if (std::isinf(v.lower)) {
            out << " -inf <= " << name << " <= " << num(v.upper) << '\n';
        } else if (std::isinf(v.upper)) {
            if (v.lower != 0.0) out << ' ' << name << " >= " << num(v.lower) << '\n';
        } else {
            out << ' ' << num(v.lower) << " <= " << name << " <= " << num(v.upper) << '\n';
        }
    }

    bool any_binary = false;
    std::size_t n = 0;
    for (const auto& v : model.vars()) {
        if (v.kind != VarKind::binary) continue;
        if (!any_binary) out << "Binaries\n";
        any_binary = true;
        out << ' ' << lp_name(v.name);
        if (++n % kTermsPerLine == 0) out << '\n';
    }
    if (any_binary && n % kTermsPerLine != 0) out << '\n';
    out << "End\n";
    return out.str();
}

std::string lp_variable_name(const std::string& name) { return lp_name(name); }

}  // namespace lecdc::milp
