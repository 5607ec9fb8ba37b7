// Command-line front end: instance generation, the two tour solvers, the
// barrier-hopping refiner, kinetic Monte Carlo simulation of minima chains,
// local-minima censuses, and the method-comparison benchmark.
//
// Exit codes: 0 success, 1 usage/argument error, 2 data or parse error,
// 3 numeric or I/O failure. All randomness derives from --seed; repeated
// invocations write byte-identical files (wall-clock timing goes to stderr).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qtsp/annealing.hpp"
#include "qtsp/bench.hpp"
#include "qtsp/config.hpp"
#include "qtsp/elastic_net.hpp"
#include "qtsp/emit.hpp"
#include "qtsp/errors.hpp"
#include "qtsp/instances.hpp"
#include "qtsp/landscapes.hpp"
#include "qtsp/refiner.hpp"
#include "qtsp/tunneling.hpp"

namespace {

using namespace qtsp;

std::string default_tour_path(const std::string& in_path) {
    std::filesystem::path p(in_path);
    p.replace_extension(".tour");
    return p.string();
}

// state -> text for census output: bit landscapes print the mask, tours the
// city order joined with '-'.
std::string state_text(std::uint64_t mask) { return std::to_string(mask); }

std::string state_text(const std::vector<int>& order) {
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) out += '-';
        out += std::to_string(order[i]);
    }
    return out;
}

// Fills `doc` with the census body: minima list, count of distinct minima per
// energy value, and a coverage estimate (exact enumeration reports 1).
template <class L>
void census_fill(nlohmann::json& doc, const L& landscape, long starts, std::uint64_t seed,
                 std::ostream& log) {
    std::map<std::string, long> histogram;  // energy text -> distinct minima at that energy
    nlohmann::json minima = nlohmann::json::array();
    if (starts > 0) {
        const SampledCensus<L> sc = census_sampled(landscape, starts, seed);
        for (const auto& [state, hits] : sc.hits) {
            const double energy = sc.energies.at(state);
            minima.push_back({{"state", state_text(state)}, {"energy", energy}, {"hits", hits}});
            ++histogram[fmt_double(energy)];
        }
        doc["mode"] = "sampled";
        doc["starts"] = sc.starts;
        doc["coverage_estimate"] = sc.coverage_estimate;
        doc["minima_count"] = static_cast<long>(sc.hits.size());
        log << "minima " << sc.hits.size() << " starts " << sc.starts << " coverage "
            << fmt_double(sc.coverage_estimate) << "\n";
    } else {
        const Census<L> census = census_brute_force(landscape);
        for (const auto& [state, energy] : census.minima) {
            minima.push_back({{"state", state_text(state)}, {"energy", energy}});
            ++histogram[fmt_double(energy)];
        }
        doc["mode"] = "exhaustive";
        doc["coverage_estimate"] = 1.0;
        doc["minima_count"] = static_cast<long>(census.minima.size());
        log << "minima " << census.minima.size() << " (exhaustive)\n";
    }
    doc["energy_histogram"] = histogram;
    doc["minima"] = std::move(minima);
}

// Barrier-rate CSV for tunnel-sim: header "forward,backward", one row per
// barrier; minima sit at unit spacing 0..k.
MinimaChain parse_rates_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    MinimaChain chain;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "forward,backward")
                throw ParseError("rates csv: expected header 'forward,backward'", line_no);
            header_seen = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("rates csv: expected 'forward,backward'", line_no);
        try {
            chain.forward_rates.push_back(std::stod(line.substr(0, comma)));
            chain.backward_rates.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError("rates csv: bad number", line_no);
        }
    }
    if (!header_seen || chain.forward_rates.empty())
        throw ParseError("rates csv: no barrier rows", line_no);
    chain.positions.resize(chain.forward_rates.size() + 1);
    for (std::size_t i = 0; i < chain.positions.size(); ++i)
        chain.positions[i] = static_cast<double>(i);
    return chain;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"quantum-inspired TSP toolkit: elastic net and annealing solvers, "
                 "tunneling-rate models, and landscape experiments"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a random unit-square instance (TSPLIB subset)");
    int gen_n = 10;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--n", gen_n, "number of cities (>= 3)")->required();
    gen->add_option("--seed", gen_seed, "generator seed")->required();
    gen->add_option("--out", gen_out, "output .tsp path")->required();

    // --- solve-en ----------------------------------------------------------
    auto* sen = app.add_subcommand("solve-en", "solve with the elastic net");
    std::string sen_in, sen_config, sen_out_tour, sen_trace, sen_trace_json;
    std::uint64_t sen_seed = 1;
    long sen_stride = 1;
    sen->add_option("--in", sen_in, "instance .tsp path")->required();
    sen->add_option("--seed", sen_seed, "run seed");
    sen->add_option("--config", sen_config, "JSON file of solver parameters");
    sen->add_option("--out-tour", sen_out_tour, "tour output path (default: <in>.tour)");
    sen->add_option("--trace", sen_trace, "CSV trace path (iter,k,free_energy,max_city_dist)");
    sen->add_option("--trace-json", sen_trace_json, "JSON mirror of the trace");
    sen->add_option("--trace-stride", sen_stride, "record every Nth iteration")
        ->check(CLI::PositiveNumber);

    // --- solve-sa ----------------------------------------------------------
    auto* ssa = app.add_subcommand("solve-sa", "solve with 2-opt simulated annealing");
    std::string ssa_in, ssa_out_tour, ssa_trace, ssa_trace_json, ssa_schedule = "geometric";
    std::uint64_t ssa_seed = 1;
    long ssa_steps = 100000, ssa_stride = 1000;
    double ssa_t0 = 1.0, ssa_ratio = 0.999, ssa_d = 1.0;
    int ssa_offset = 1;
    ssa->add_option("--in", ssa_in, "instance .tsp path")->required();
    ssa->add_option("--seed", ssa_seed, "run seed");
    ssa->add_option("--schedule", ssa_schedule, "cooling schedule")
        ->check(CLI::IsMember({"geometric", "logarithmic"}));
    ssa->add_option("--steps", ssa_steps, "Metropolis proposals")->check(CLI::PositiveNumber);
    ssa->add_option("--t0", ssa_t0, "geometric: start temperature");
    ssa->add_option("--ratio", ssa_ratio, "geometric: per-step factor in (0,1)");
    ssa->add_option("--d", ssa_d, "logarithmic: barrier scale D in T = D/ln(step+offset)");
    ssa->add_option("--offset", ssa_offset, "logarithmic: offset (>= 1)");
    ssa->add_option("--out-tour", ssa_out_tour, "tour output path (default: <in>.tour)");
    ssa->add_option("--trace", ssa_trace, "CSV trace path (step,temperature,energy_current,energy_best)");
    ssa->add_option("--trace-json", ssa_trace_json, "JSON mirror of the trace");
    ssa->add_option("--trace-stride", ssa_stride, "record every Nth step")->check(CLI::PositiveNumber);

    // --- refine ------------------------------------------------------------
    auto* ref = app.add_subcommand("refine", "barrier-hopping refinement of an existing tour");
    std::string ref_in, ref_tour, ref_out_tour, ref_hops;
    std::uint64_t ref_seed = 1;
    int ref_width = 4, ref_samples = 400, ref_hops_cap = 1000;
    ref->add_option("--in", ref_in, "instance .tsp path")->required();
    ref->add_option("--tour", ref_tour, "initial tour file")->required();
    ref->add_option("--seed", ref_seed, "sampling seed");
    ref->add_option("--max-width", ref_width, "largest hop width scanned (>= 2)");
    ref->add_option("--samples", ref_samples, "random trials per width per round");
    ref->add_option("--max-hops", ref_hops_cap, "hop cap");
    ref->add_option("--out-tour", ref_out_tour, "refined tour path (default: <tour>.refined)");
    ref->add_option("--hops-json", ref_hops, "hop log path [{width,e_from,e_to,tau}]");

    // --- tunnel-sim --------------------------------------------------------
    auto* sim = app.add_subcommand("tunnel-sim",
                                   "kinetic Monte Carlo over a chain of minima with tunneling rates");
    std::string sim_rates = "params", sim_out;
    double sim_tmax = 50.0;
    long sim_traj = 1000;
    std::uint64_t sim_seed = 1;
    int sim_minima = 11;
    TunnelParams sim_params;
    sim->add_option("--rates", sim_rates,
                    "'params' for a uniform chain from the rate model, or a CSV path "
                    "with header forward,backward");
    sim->add_option("--tmax", sim_tmax, "simulated time horizon")->check(CLI::PositiveNumber);
    sim->add_option("--trajectories", sim_traj, "ensemble size")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "ensemble seed");
    sim->add_option("--out", sim_out, "CSV output path (t,mean_q,stderr_q)")->required();
    std::string sim_summary;
    sim->add_option("--summary-json", sim_summary,
                    "also write the JSON summary (slope fit, drift predictions) here");
    sim->add_option("--minima", sim_minima, "chain length for --rates params");
    sim->add_option("--delta", sim_params.delta, "tunnel matrix element");
    sim->add_option("--omega", sim_params.omega, "well frequency");
    sim->add_option("--sigma", sim_params.sigma, "bias between neighbor minima");
    sim->add_option("--eta", sim_params.eta, "friction coefficient");
    sim->add_option("--d", sim_params.d, "barrier width");
    sim->add_option("--hbar", sim_params.hbar, "hbar (natural units)");
    std::string sim_beta = "inf";
    sim->add_option("--beta", sim_beta, "inverse temperature ('inf' for zero temperature)");

    // --- census ------------------------------------------------------------
    auto* cen = app.add_subcommand("census", "count local minima of an energy landscape");
    std::string cen_landscape, cen_out;
    int cen_n = 10, cen_patterns = 1;
    long cen_starts = 0;
    std::uint64_t cen_seed = 1;
    cen->add_option("--landscape", cen_landscape, "hopfield | spinglass | tour")
        ->required()
        ->check(CLI::IsMember({"hopfield", "spinglass", "tour"}));
    cen->add_option("--n", cen_n, "spins / cities")->required();
    cen->add_option("--patterns", cen_patterns, "hopfield: stored pattern count");
    cen->add_option("--starts", cen_starts,
                    "random descents for a sampled census (0 = exhaustive enumeration)");
    cen->add_option("--seed", cen_seed, "landscape + sampling seed");
    cen->add_option("--out", cen_out, "JSON output path (minima, energy histogram, coverage)")
        ->required();

    // --- bench -------------------------------------------------------------
    auto* ben = app.add_subcommand("bench", "compare methods at matched evaluation budgets");
    std::string ben_config, ben_out_dir = ".";
    std::optional<int> ben_instances, ben_n;
    std::optional<std::uint64_t> ben_seed;
    std::optional<long long> ben_budget;
    ben->add_option("--config", ben_config, "JSON benchmark configuration");
    ben->add_option("--out-dir", ben_out_dir, "directory for bench.csv / bench.json");
    ben->add_option("--instances", ben_instances, "override: instance count");
    ben->add_option("--n", ben_n, "override: cities per instance");
    ben->add_option("--seed", ben_seed, "override: master seed");
    ben->add_option("--budget", ben_budget, "override: terms per base solve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the error and usage hint to stderr
        return 1;
    }

    if (*gen) {
        const TspInstance inst = random_euclidean(gen_n, gen_seed);
        write_file(gen_out, write_tsplib(inst));
        std::cout << "wrote " << gen_out << " (" << inst.n() << " cities)\n";
        return 0;
    }

    if (*sen) {
        const TspInstance inst = parse_tsplib(read_file(sen_in));
        EnParams params;
        if (!sen_config.empty())
            params = en_params_from_json(parse_json_text(read_file(sen_config), sen_config));
        const EnRunResult run = run_elastic_net(inst, params, sen_seed, sen_stride);
        const Tour tour = extract_tour(inst, run.string);
        const std::string out_path =
            sen_out_tour.empty() ? default_tour_path(sen_in) : sen_out_tour;
        write_file(out_path, write_tour(tour, inst.name()));
        if (!sen_trace.empty()) write_file(sen_trace, en_trace_csv(run.trace));
        if (!sen_trace_json.empty())
            write_file(sen_trace_json, en_trace_json(run.trace).dump(2) + "\n");
        std::cout << "length " << fmt_double(tour.length) << " iters " << run.iterations
                  << " kernel_terms " << run.kernel_terms << " tour " << out_path << "\n";
        return 0;
    }

    if (*ssa) {
        const TspInstance inst = parse_tsplib(read_file(ssa_in));
        const Schedule sched = ssa_schedule == "geometric" ? Schedule::geometric(ssa_t0, ssa_ratio)
                                                           : Schedule::logarithmic(ssa_d, ssa_offset);
        const SaTourResult run = sa_solve_tour(inst, sched, ssa_steps, ssa_seed, nullptr, ssa_stride);
        const std::string out_path =
            ssa_out_tour.empty() ? default_tour_path(ssa_in) : ssa_out_tour;
        write_file(out_path, write_tour(run.best, inst.name()));
        if (!ssa_trace.empty()) write_file(ssa_trace, sa_trace_csv(run.trace));
        if (!ssa_trace_json.empty())
            write_file(ssa_trace_json, sa_trace_json(run.trace).dump(2) + "\n");
        std::cout << "length " << fmt_double(run.best.length) << " steps " << ssa_steps
                  << " distance_terms " << run.distance_terms << " tour " << out_path << "\n";
        return 0;
    }

    if (*ref) {
        const TspInstance inst = parse_tsplib(read_file(ref_in));
        const std::vector<int> start = parse_tour(read_file(ref_tour));
        const double start_length = tour_length(inst, start);
        RefinerConfig cfg;
        cfg.max_width = ref_width;
        cfg.samples_per_width = ref_samples;
        cfg.enum_budget = ref_samples;
        cfg.max_hops = ref_hops_cap;
        cfg.seed = ref_seed;
        const TourLandscape land(inst);
        const RefineResult<TourLandscape> result = tunnel_refine(land, start, cfg);
        Tour refined;
        refined.order = result.state;
        refined.length = result.energy;
        const std::string out_path = ref_out_tour.empty() ? ref_tour + ".refined" : ref_out_tour;
        write_file(out_path, write_tour(refined, inst.name()));
        if (!ref_hops.empty()) write_file(ref_hops, hops_json(result.hops).dump(2) + "\n");
        std::cout << "length " << fmt_double(start_length) << " -> " << fmt_double(result.energy)
                  << " hops " << result.hops.size() << " tau_total " << fmt_double(result.total_tau)
                  << " tour " << out_path << "\n";
        return 0;
    }

    if (*sim) {
        try {
            sim_params.beta = sim_beta == "inf" ? std::numeric_limits<double>::infinity()
                                                : std::stod(sim_beta);
        } catch (const std::exception&) {
            std::cerr << "argument error: --beta expects a number or 'inf'\n";
            return 1;
        }
        MinimaChain chain;
        if (sim_rates == "params") {
            chain = MinimaChain::uniform(sim_minima, sim_params.d, rate_forward(sim_params),
                                         rate_backward(sim_params));
        } else {
            chain = parse_rates_csv(read_file(sim_rates));
        }
        KmcParams kp;
        kp.t_max = sim_tmax;
        kp.trajectories = sim_traj;
        kp.seed = sim_seed;
        const KmcStats stats = simulate_kmc(chain, kp);
        write_file(sim_out, kmc_trace_csv(stats));
        // Summary JSON: the fitted <q(t)> slope plus, when the chain came from
        // the rate model, both analytic drift-velocity readings for comparison.
        nlohmann::json summary{
            {"slope", stats.slope},
            {"slope_stderr", stats.slope_stderr},
            {"arrived", stats.arrived},
            {"trajectories", sim_traj},
            {"mfpt_mean", stats.arrived > 0 ? nlohmann::json(stats.mfpt_mean) : nlohmann::json()},
            {"mfpt_stderr", stats.arrived > 1 ? nlohmann::json(stats.mfpt_stderr) : nlohmann::json()},
            {"drift_literal", nullptr},
            {"drift_corrected", nullptr},
        };
        // Analytic drift needs the rate model and a finite temperature (the
        // tanh factor is defined for finite beta only); otherwise left null.
        if (sim_rates == "params" && std::isfinite(sim_params.beta)) {
            summary["drift_literal"] = drift_velocity(sim_params, DriftVariant::literal);
            summary["drift_corrected"] = drift_velocity(sim_params, DriftVariant::corrected);
        }
        if (!sim_summary.empty()) write_file(sim_summary, summary.dump(2) + "\n");
        std::cout << summary.dump() << "\n";
        return 0;
    }

    if (*cen) {
        nlohmann::json doc;
        doc["landscape"] = cen_landscape;
        doc["n"] = cen_n;
        doc["seed"] = cen_seed;
        if (cen_landscape == "hopfield") {
            doc["patterns"] = cen_patterns;
            const HopfieldNet net =
                HopfieldNet::from_patterns(HopfieldNet::random_patterns(cen_n, cen_patterns, cen_seed));
            census_fill(doc, net, cen_starts, cen_seed, std::cout);
        } else if (cen_landscape == "spinglass") {
            const SpinGlass glass = SpinGlass::random(cen_n, cen_seed);
            census_fill(doc, glass, cen_starts, cen_seed, std::cout);
        } else {
            const TspInstance inst = random_euclidean(cen_n, cen_seed);
            const TourLandscape land(inst);
            census_fill(doc, land, cen_starts, cen_seed, std::cout);
        }
        write_file(cen_out, doc.dump(2) + "\n");
        return 0;
    }

    if (*ben) {
        BenchConfig cfg;
        if (!ben_config.empty())
            cfg = bench_config_from_json(parse_json_text(read_file(ben_config), ben_config));
        if (ben_instances) cfg.instances = *ben_instances;
        if (ben_n) cfg.n = *ben_n;
        if (ben_seed) cfg.seed = *ben_seed;
        if (ben_budget) cfg.budget = *ben_budget;
        const BenchReport report = bench_compare(cfg);
        const std::filesystem::path dir(ben_out_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        write_file((dir / "bench_config.json").string(), to_json(cfg).dump(2) + "\n");
        write_file((dir / "bench.csv").string(), bench_csv(report));
        write_file((dir / "bench.json").string(), bench_json(report).dump(2) + "\n");
        for (const auto& [method, med] : report.median_length)
            std::cout << "median " << method << " " << fmt_double(med) << "\n";
        for (const auto& c : report.comparisons)
            std::cout << c.first << " vs " << c.second << ": " << c.wins << " wins, " << c.ties
                      << " ties, " << c.losses << " losses\n";
        double wall = 0.0;
        for (const BenchRow& r : report.rows) wall += r.wall_ms;
        std::cerr << "bench wall time " << wall << " ms across " << report.rows.size()
                  << " cells\n";
        return 0;
    }

    return 1;  // unreachable: require_subcommand(1)
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const qtsp::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const qtsp::NumericError& e) {  // includes IoError
        std::cerr << "numeric/io error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
