#include "lecdc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lecdc {

namespace {

constexpr int kPeriodsPerDay = 24;
constexpr int kYearDays = 360;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// splitmix64: tiny, portable, and good enough for profile noise.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
    std::uint64_t state_;
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    Rng r(seed ^ (a * 0x100000001B3ull) ^ (b << 21) ^ (c << 42));
    r.next();
    return r.next();
}

enum Stream : std::uint64_t { kWeather = 1, kMarket, kWind, kDc, kLoad, kPv, kDrive, kHouse };

double round_to(double v, double step) { return std::round(v / step) * step; }

// +1 in mid-January, -1 in mid-July.
double winter(int day) { return std::cos(kTwoPi * (day - 15) / kYearDays); }

struct HouseParams {
    double peak_load;
    double pv_peak;
    double resistance;
    double km_per_day;
    double kwh_per_100km;
    int arrival;
    int departure;
};

HouseParams house_params(std::uint64_t seed, int h) {
    Rng r(mix(seed, kHouse, h));
    HouseParams p{};
    p.peak_load = round_to(r.uniform(3.0, 10.0), 0.1);
    p.pv_peak = round_to(r.uniform(3.0, 10.0), 0.1);
    p.resistance = round_to(r.uniform(11.0, 15.0), 0.5);
    p.km_per_day = round_to(r.uniform(50.0, 100.0), 1.0);
    p.kwh_per_100km = round_to(r.uniform(15.0, 20.0), 0.5);
    p.arrival = r.integer(17, 19);
    p.departure = r.integer(7, 8);
    return p;
}

}  // namespace

CaseBundle generate_case(const SyntheticOptions& o) {
    if (o.households < 1) throw std::invalid_argument("at least one household required");
    if (o.days < 1 || o.first_day < 0) throw std::invalid_argument("days must be positive and first_day nonnegative");
    const int T = o.days * kPeriodsPerDay;
    const int H = o.households;

    CaseBundle b;
    b.name = o.name;
    b.grid = {1.0, T, o.first_day * kPeriodsPerDay};
    b.scenario = ScenarioConfig::tc_jp_afrr();
    b.data_centre = DataCentreSpec{};
    b.data_centre.rating = 27.0;
    b.data_centre.exchanger_eff = 0.5;

    auto& p = b.profiles;
    p.pv_gen.assign(H, {});
    p.drive_power.assign(H, {});
    std::vector<HouseParams> hp;
    for (int h = 0; h < H; ++h) {
        hp.push_back(house_params(o.seed, h));
        HouseholdSpec hh;
        hh.id = "h" + std::to_string(h + 1);
        hh.ev.soc_min = 10.0;
        hh.ev.soc_max = 60.0;
        hh.ev.soc_initial = 35.0;
        hh.ev.arrival = hp[h].arrival;
        hh.ev.departure = hp[h].departure;
        hh.thermal.resistance = hp[h].resistance;
        b.community.households.push_back(std::move(hh));
    }

    for (int d = o.first_day; d < o.first_day + o.days; ++d) {
        const int day = d % kYearDays;
        const double w = winter(day);
        Rng weather(mix(o.seed, kWeather, d));
        Rng market(mix(o.seed, kMarket, d));
        Rng wind(mix(o.seed, kWind, d));
        Rng dc(mix(o.seed, kDc, d));

        const double temp_offset = weather.uniform(-2.0, 2.0);
        const double cloud = weather.uniform(0.3, 1.0);
        const double daylight = 12.0 - 3.5 * w;  // hours
        const double wind_level = std::clamp(wind.uniform(0.1, 0.5) + 0.12 * w, 0.02, 0.7);
        const double wind_phase = wind.uniform(0.0, kTwoPi);
        const double price_level = 0.11 + 0.03 * w + market.uniform(-0.015, 0.015);
        const double mu_level = dc.uniform(7.0, 9.0);

        for (int t = 0; t < kPeriodsPerDay; ++t) {
            const double hour = t + 0.5;
            double temp = 11.0 - 8.0 * w + temp_offset + 4.0 * std::sin(kTwoPi * (hour - 9.0) / 24.0) +
                          weather.uniform(-0.5, 0.5);
            p.outdoor_temp.push_back(round_to(temp, 0.01));

            double shape = 0.02 * std::cos(kTwoPi * (hour - 3.0) / 24.0 + std::numbers::pi) +
                           0.05 * std::exp(-0.5 * std::pow((hour - 8.0) / 1.5, 2)) +
                           0.07 * std::exp(-0.5 * std::pow((hour - 19.0) / 2.0, 2));
            double da = std::max(0.07, price_level + shape + market.uniform(-0.01, 0.01));
            p.day_ahead_price.push_back(round_to(da, 1e-4));
            p.ppa_price.push_back(0.04);
            p.afrr_price.push_back(round_to(market.uniform(0.002, 0.016), 1e-4));

            double cf = wind_level * (1.0 + 0.5 * std::sin(kTwoPi * hour / 24.0 + wind_phase)) +
                        wind.uniform(-0.05, 0.05);
            p.wind_gen.push_back(round_to(10.0 * std::clamp(cf, 0.0, 1.0), 0.01));

            double load = 19.0 + 4.0 * std::exp(-0.5 * std::pow((hour - 14.0) / 4.0, 2)) + dc.uniform(-1.5, 1.5);
            p.workload.push_back(round_to(std::clamp(load, 5.0, 25.0), 0.01));
            p.mean_job_duration.push_back(round_to(mu_level + dc.uniform(-1.0, 1.0), 0.01));

            const double sun_span = std::clamp((hour - (12.0 - daylight / 2.0)) / daylight, 0.0, 1.0);
            const double sun = std::sin(std::numbers::pi * sun_span);
            for (int h = 0; h < H; ++h) {
                Rng pv(mix(o.seed, kPv, d, h * kPeriodsPerDay + t));
                p.pv_gen[h].push_back(round_to(hp[h].pv_peak * sun * cloud * pv.uniform(0.85, 1.0), 0.001));
            }
        }

        for (int h = 0; h < H; ++h) {
            auto& hh = b.community.households[h];
            Rng lr(mix(o.seed, kLoad, d, h));
            const double level = lr.uniform(0.85, 1.15);
            for (int t = 0; t < kPeriodsPerDay; ++t) {
                const double hour = t + 0.5;
                double frac = 0.12 + 0.12 * std::exp(-0.5 * std::pow((hour - 7.5) / 1.2, 2)) +
                              0.08 * std::exp(-0.5 * std::pow((hour - 13.0) / 2.0, 2)) +
                              0.55 * std::exp(-0.5 * std::pow((hour - 19.5) / 1.8, 2));
                double base = round_to(hp[h].peak_load * frac * level * lr.uniform(0.9, 1.1), 0.001);
                hh.baseline_load.push_back(base);
                hh.load_lower.push_back(round_to(0.8 * base, 0.001));
                hh.load_upper.push_back(round_to(1.2 * base, 0.001));
            }

            Rng dr(mix(o.seed, kDrive, d, h));
            const double energy = hp[h].km_per_day * dr.uniform(0.8, 1.2) * hp[h].kwh_per_100km / 100.0;
            // Plugged in through the departure period and again from arrival.
            const int away = hp[h].arrival - hp[h].departure - 1;
            for (int t = 0; t < kPeriodsPerDay; ++t) {
                bool driving = t > hp[h].departure && t < hp[h].arrival;
                p.drive_power[h].push_back(driving ? round_to(energy / away, 0.001) : 0.0);
            }
        }
    }
    return b;
}

}  // namespace lecdc
