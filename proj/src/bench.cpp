#include "qtsp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "qtsp/annealing.hpp"
#include "qtsp/elastic_net.hpp"
#include "qtsp/format.hpp"
#include "qtsp/instances.hpp"
#include "qtsp/landscapes.hpp"
#include "qtsp/refiner.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

namespace {

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t instance, std::uint64_t role) {
    std::uint64_t s = master ^ (instance * 0x9e3779b97f4a7c15ULL) ^ (role + 0xd1b54a32d192ed03ULL);
    return splitmix64(s);
}

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<double> gap_vs(const std::optional<Tour>& opt, double length) {
    if (!opt.has_value()) return std::nullopt;
    return std::max(0.0, (length - opt->length) / opt->length);
}

}  // namespace

BenchReport bench_compare(const BenchConfig& cfg) {
    cfg.validate();
    const auto wants = [&](const char* m) {
        return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
    };
    const bool need_en = wants("en") || wants("en+refine");
    const bool need_sa = wants("sa") || wants("sa+refine");

    BenchReport report;
    for (int idx = 0; idx < cfg.instances; ++idx) {
        const std::uint64_t inst_seed = sub_seed(cfg.seed, static_cast<std::uint64_t>(idx), 1);
        const TspInstance inst = random_euclidean(cfg.n, inst_seed);
        std::optional<Tour> opt;
        if (cfg.n <= 11) opt = brute_force_optimal(inst);
        const TourLandscape land(inst);

        std::map<std::string, BenchRow> cells;
        const auto add = [&](const char* method, double length, long long evals, double tau,
                             double wall) {
            cells[method] = BenchRow{inst.name(), inst_seed,      method, length,
                                     gap_vs(opt, length), evals, tau,    wall};
        };

        if (need_en) {
            const double t0 = now_ms();
            const EnRunResult en = run_elastic_net(
                inst, cfg.en, sub_seed(cfg.seed, static_cast<std::uint64_t>(idx), 2),
                cfg.trace_stride, cfg.budget);
            const Tour en_tour = extract_tour(inst, en.string);
            const long long en_terms =
                en.kernel_terms + static_cast<long long>(cfg.n) * en.string.m();
            const double en_ms = now_ms() - t0;
            if (wants("en")) add("en", en_tour.length, en_terms, 0.0, en_ms);
            if (wants("en+refine")) {
                const double t1 = now_ms();
                RefinerConfig rc = cfg.refiner;
                rc.seed = sub_seed(cfg.seed, static_cast<std::uint64_t>(idx), 3);
                const RefineResult<TourLandscape> r = tunnel_refine(land, en_tour.order, rc);
                add("en+refine", r.energy,
                    en_terms + (r.trial_evals + r.descent_evals) * cfg.n, r.total_tau,
                    en_ms + (now_ms() - t1));
            }
        }
        if (need_sa) {
            const double t0 = now_ms();
            const long steps = static_cast<long>(std::max<long long>(1, (cfg.budget - cfg.n) / 4));
            const double ratio = std::pow(cfg.sa_t_end / cfg.sa_t0, 1.0 / static_cast<double>(steps));
            const Schedule sched = Schedule::geometric(cfg.sa_t0, ratio);
            const SaTourResult sa =
                sa_solve_tour(inst, sched, steps,
                              sub_seed(cfg.seed, static_cast<std::uint64_t>(idx), 4), nullptr,
                              cfg.trace_stride);
            const double sa_ms = now_ms() - t0;
            if (wants("sa")) add("sa", sa.best.length, sa.distance_terms, 0.0, sa_ms);
            if (wants("sa+refine")) {
                const double t1 = now_ms();
                RefinerConfig rc = cfg.refiner;
                rc.seed = sub_seed(cfg.seed, static_cast<std::uint64_t>(idx), 5);
                const RefineResult<TourLandscape> r = tunnel_refine(land, sa.best.order, rc);
                add("sa+refine", r.energy,
                    sa.distance_terms + (r.trial_evals + r.descent_evals) * cfg.n, r.total_tau,
                    sa_ms + (now_ms() - t1));
            }
        }

        for (const std::string& m : cfg.methods) report.rows.push_back(cells.at(m));
    }

    for (const std::string& m : cfg.methods) {
        std::vector<double> lengths;
        for (const BenchRow& r : report.rows) {
            if (r.method == m) lengths.push_back(r.length);
        }
        report.median_length.emplace_back(m, median(std::move(lengths)));
    }

    const auto compare_pair = [&](const char* a, const char* b) {
        if (!wants(a) || !wants(b)) return;
        BenchReport::Comparison c{a, b, 0, 0, 0};
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            if (report.rows[i].method != a) continue;
            // rows are instance-major, so b's row for the same instance is nearby
            for (std::size_t j = 0; j < report.rows.size(); ++j) {
                if (report.rows[j].method == b && report.rows[j].instance == report.rows[i].instance) {
                    const double la = report.rows[i].length, lb = report.rows[j].length;
                    const double tol = 1e-12 * std::max({1.0, std::fabs(la), std::fabs(lb)});
                    if (la < lb - tol)
                        ++c.wins;
                    else if (lb < la - tol)
                        ++c.losses;
                    else
                        ++c.ties;
                    break;
                }
            }
        }
        report.comparisons.push_back(std::move(c));
    };
    compare_pair("en", "sa");
    compare_pair("en+refine", "sa+refine");
    return report;
}

std::string bench_csv(const BenchReport& report) {
    std::string out = "instance,seed,method,length,gap,evals,tau_total\n";
    for (const BenchRow& r : report.rows) {
        out += r.instance + "," + std::to_string(r.seed) + "," + r.method + "," +
               fmt_double(r.length) + "," + (r.gap.has_value() ? fmt_double(*r.gap) : "") + "," +
               std::to_string(r.evals) + "," + fmt_double(r.tau_total) + "\n";
    }
    return out;
}

nlohmann::json bench_json(const BenchReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const BenchRow& r : report.rows) {
        rows.push_back({{"instance", r.instance},
                        {"seed", r.seed},
                        {"method", r.method},
                        {"length", r.length},
                        {"gap", r.gap.has_value() ? nlohmann::json(*r.gap) : nlohmann::json(nullptr)},
                        {"evals", r.evals},
                        {"tau_total", r.tau_total}});
    }
    nlohmann::json medians = nlohmann::json::object();
    for (const auto& [method, value] : report.median_length) medians[method] = value;
    nlohmann::json comparisons = nlohmann::json::array();
    for (const auto& c : report.comparisons) {
        comparisons.push_back({{"first", c.first},
                               {"second", c.second},
                               {"wins", c.wins},
                               {"ties", c.ties},
                               {"losses", c.losses}});
    }
    return {{"rows", rows}, {"median_length", medians}, {"comparisons", comparisons}};
}

}  // namespace qtsp
