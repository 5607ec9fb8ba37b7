#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qtsp/annealing.hpp"
#include "qtsp/bench.hpp"
#include "qtsp/config.hpp"
#include "qtsp/emit.hpp"
#include "qtsp/errors.hpp"
#include "qtsp/format.hpp"
#include "qtsp/instances.hpp"

using namespace qtsp;
using nlohmann::json;

namespace {

const std::filesystem::path& scratch() {
    static const std::filesystem::path dir = [] {
        const std::filesystem::path d =
            std::filesystem::temp_directory_path() /
            ("qtsp_cli_" + std::to_string(static_cast<long>(::getpid())));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string spath(const std::string& name) { return (scratch() / name).string(); }

struct CliResult {
    int code = -1;
    std::string output;  // stdout and stderr combined
};

CliResult cli(const std::string& args) {
    static int run_no = 0;
    const std::string cap = spath("capture_" + std::to_string(run_no++) + ".txt");
    const std::string cmd = std::string(QTSP_BIN) + " " + args + " > " + cap + " 2>&1";
    const int rc = std::system(cmd.c_str());
    CliResult r;
    if (rc != -1 && WIFEXITED(rc)) r.code = WEXITSTATUS(rc);
    r.output = read_file(cap);
    return r;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

long count_lines(const std::string& text) {
    long n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

}  // namespace

// ---------------------------------------------------------------- config ---

TEST_CASE("en params survive a JSON round trip and reject bad input") {
    EnParams p;
    p.alpha = 0.5;
    p.beta = 3.0;
    p.m_ratio = 4.0;
    p.k0 = 0.3;
    p.k_decay = 0.95;
    p.k_period = 10;
    p.k_min = 0.02;
    p.max_iters = 123;
    p.squared_exponent = false;

    const EnParams q = en_params_from_json(to_json(p));
    CHECK(q.alpha == p.alpha);
    CHECK(q.beta == p.beta);
    CHECK(q.m_ratio == p.m_ratio);
    CHECK(q.k0 == p.k0);
    CHECK(q.k_decay == p.k_decay);
    CHECK(q.k_period == p.k_period);
    CHECK(q.k_min == p.k_min);
    CHECK(q.max_iters == p.max_iters);
    CHECK(q.squared_exponent == p.squared_exponent);

    // An empty object keeps every default.
    const EnParams defaults = en_params_from_json(json::object());
    CHECK(defaults.alpha == EnParams{}.alpha);
    CHECK(defaults.max_iters == EnParams{}.max_iters);

    json typo = to_json(p);
    typo["alhpa"] = 1.0;
    CHECK_THROWS_AS(en_params_from_json(typo), ParseError);
    CHECK_THROWS_AS(en_params_from_json(json{{"alpha", "big"}}), ParseError);
    CHECK_THROWS_AS(en_params_from_json(json{{"alpha", 0.0}}), ParseError);  // fails validation
    CHECK_THROWS_AS(en_params_from_json(json(3)), ParseError);               // not an object
}

TEST_CASE("schedules round trip through JSON by kind") {
    const Schedule g = schedule_from_json(to_json(Schedule::geometric(0.7, 0.97)));
    CHECK(g.kind == Schedule::Kind::geometric);
    CHECK(g.t0 == 0.7);
    CHECK(g.ratio == 0.97);

    const Schedule l = schedule_from_json(to_json(Schedule::logarithmic(2.5, 3)));
    CHECK(l.kind == Schedule::Kind::logarithmic);
    CHECK(l.d == 2.5);
    CHECK(l.offset == 3);

    const Schedule c = schedule_from_json(to_json(Schedule::constant(0.4)));
    CHECK(c.kind == Schedule::Kind::constant);
    CHECK(c.t_const == 0.4);

    // Offset is optional for logarithmic.
    CHECK(schedule_from_json(json{{"kind", "logarithmic"}, {"d", 1.5}}).offset == 1);

    CHECK_THROWS_AS(schedule_from_json(json{{"t0", 1.0}}), ParseError);        // missing kind
    CHECK_THROWS_AS(schedule_from_json(json{{"kind", "linear"}}), ParseError); // unknown kind
    CHECK_THROWS_AS(schedule_from_json(json{{"kind", "geometric"}, {"t", 1.0}}), ParseError);
    CHECK_THROWS_AS(schedule_from_json(json{{"kind", "geometric"}, {"ratio", 0.5}}), ParseError);
    CHECK_THROWS_AS(schedule_from_json(json{{"kind", 3}}), ParseError);        // wrong type
    CHECK_THROWS_AS(schedule_from_json(json{{"kind", "geometric"}, {"t0", 1.0}, {"ratio", 1.5}}),
                    ParseError);  // factory validation
}

TEST_CASE("tunnel params map infinite beta to JSON null") {
    CHECK(to_json(TunnelParams{})["beta"].is_null());

    TunnelParams p;
    p.delta = 2.0;
    p.omega = 1.5;
    p.sigma = 0.25;
    p.eta = 2.2;
    p.d = 1.5;
    p.hbar = 0.9;
    p.beta = 2.5;
    const json j = to_json(p);
    CHECK(j["beta"] == 2.5);

    const TunnelParams q = tunnel_params_from_json(j);
    CHECK(q.delta == p.delta);
    CHECK(q.omega == p.omega);
    CHECK(q.sigma == p.sigma);
    CHECK(q.eta == p.eta);
    CHECK(q.d == p.d);
    CHECK(q.hbar == p.hbar);
    CHECK(q.beta == p.beta);

    const TunnelParams r = tunnel_params_from_json(json{{"beta", nullptr}});
    CHECK(std::isinf(r.beta));

    CHECK_THROWS_AS(tunnel_params_from_json(json{{"Delta", 1.0}}), ParseError);
    CHECK_THROWS_AS(tunnel_params_from_json(json{{"delta", 0.0}}), ParseError);  // validation
}

TEST_CASE("refiner config round trips with its nested rate params") {
    RefinerConfig c;
    c.max_width = 3;
    c.samples_per_width = 77;
    c.enum_budget = 50;
    c.seed = 9;
    c.max_hops = 12;
    c.rate_params.sigma = 2.0;

    const RefinerConfig q = refiner_config_from_json(to_json(c));
    CHECK(q.max_width == c.max_width);
    CHECK(q.samples_per_width == c.samples_per_width);
    CHECK(q.enum_budget == c.enum_budget);
    CHECK(q.seed == c.seed);
    CHECK(q.max_hops == c.max_hops);
    CHECK(q.rate_params.sigma == 2.0);

    json nested = to_json(c);
    nested["rate_params"]["gamma"] = 1.0;
    CHECK_THROWS_AS(refiner_config_from_json(nested), ParseError);

    json invalid = to_json(c);
    invalid["max_width"] = 1;
    CHECK_THROWS_AS(refiner_config_from_json(invalid), ParseError);

    // tau(k) shrinking with width is a config error too (see refiner tests).
    json shrink = to_json(RefinerConfig{});
    shrink["rate_params"]["eta"] = 0.001;
    CHECK_THROWS_AS(refiner_config_from_json(shrink), ParseError);
}

TEST_CASE("bench config validation and JSON round trip") {
    BenchConfig c;
    CHECK_NOTHROW(c.validate());
    const BenchConfig q = bench_config_from_json(to_json(c));
    CHECK(q.instances == c.instances);
    CHECK(q.n == c.n);
    CHECK(q.seed == c.seed);
    CHECK(q.methods == c.methods);
    CHECK(q.budget == c.budget);
    CHECK(q.sa_t0 == c.sa_t0);
    CHECK(q.sa_t_end == c.sa_t_end);
    CHECK(q.trace_stride == c.trace_stride);
    CHECK(q.en.alpha == c.en.alpha);
    CHECK(q.refiner.max_width == c.refiner.max_width);

    auto bad = [](auto&& mutate) {
        BenchConfig b;
        mutate(b);
        CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    };
    bad([](BenchConfig& b) { b.instances = 0; });
    bad([](BenchConfig& b) { b.n = 2; });
    bad([](BenchConfig& b) { b.budget = 33; });  // < 4 + n for n = 30
    bad([](BenchConfig& b) { b.methods.clear(); });
    bad([](BenchConfig& b) { b.methods = {"foo"}; });
    bad([](BenchConfig& b) { b.sa_t0 = b.sa_t_end; });
    bad([](BenchConfig& b) { b.trace_stride = 0; });

    CHECK_THROWS_AS(bench_config_from_json(json{{"instances", 0}}), ParseError);
    CHECK_THROWS_AS(bench_config_from_json(json{{"cities", 5}}), ParseError);
}

TEST_CASE("json text parsing maps syntax errors to data errors") {
    CHECK(parse_json_text("{\"a\": 1}", "cfg.json")["a"] == 1);
    try {
        parse_json_text("{oops", "cfg.json");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("cfg.json") != std::string::npos);
    }
}

// ------------------------------------------------------------ formatting ---

TEST_CASE("double formatting round-trips exactly") {
    CHECK(fmt_double(0.1) == "0.10000000000000001");
    CHECK(fmt_double(1.0) == "1");
    CHECK(fmt_double(0.5) == "0.5");
    for (const double v : {0.1, 1.0 / 3.0, 2.2638775329785168, 1e-300, -2.5e17, M_PI}) {
        CAPTURE(v);
        CHECK(std::strtod(fmt_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("trace CSV bodies match their documented schemas") {
    CHECK(en_trace_csv({{0, 0.2, -1.5, 0.25}}) ==
          "iter,k,free_energy,max_city_dist\n0,0.20000000000000001,-1.5,0.25\n");
    CHECK(sa_trace_csv({{5, 0.5, 2.0, 1.5}}) ==
          "step,temperature,energy_current,energy_best\n5,0.5,2,1.5\n");

    KmcStats st;
    st.t_grid = {0.0, 1.0};
    st.mean_q = {0.0, 0.5};
    st.stderr_q = {0.0, 0.25};
    CHECK(kmc_trace_csv(st) == "t,mean_q,stderr_q\n0,0,0\n1,0.5,0.25\n");

    const json en = en_trace_json({{7, 0.1, -2.0, 0.5}});
    REQUIRE(en.is_array());
    CHECK(en[0]["iter"] == 7);
    CHECK(en[0]["k"] == 0.1);
    CHECK(en[0]["free_energy"] == -2.0);
    CHECK(en[0]["max_city_dist"] == 0.5);

    const json sa = sa_trace_json({{5, 0.5, 2.0, 1.5}});
    CHECK(sa[0]["step"] == 5);
    CHECK(sa[0]["energy_best"] == 1.5);

    const json km = kmc_trace_json(st);
    CHECK(km[1]["t"] == 1.0);
    CHECK(km[1]["mean_q"] == 0.5);
    CHECK(km[1]["stderr_q"] == 0.25);

    const json hops = hops_json({{4.0, 2.5, 2, 0.7, 9}});
    REQUIRE(hops.is_array());
    CHECK(hops[0].size() == 4);  // trials stay internal
    CHECK(hops[0]["width"] == 2);
    CHECK(hops[0]["e_from"] == 4.0);
    CHECK(hops[0]["e_to"] == 2.5);
    CHECK(hops[0]["tau"] == 0.7);
}

TEST_CASE("file helpers round trip and name the path on failure") {
    const std::string path = spath("roundtrip.txt");
    write_file(path, "two\nlines\n");
    CHECK(read_file(path) == "two\nlines\n");

    const std::string absent = spath("no_such_file.txt");
    try {
        read_file(absent);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(absent) != std::string::npos);
    }

    const std::string unwritable = spath("no_such_dir/out.txt");
    try {
        write_file(unwritable, "x");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(unwritable) != std::string::npos);
    }
}

// ----------------------------------------------------------------- bench ---

TEST_CASE("bench harness compares methods on matched budgets") {
    BenchConfig cfg;
    cfg.instances = 3;
    cfg.n = 4;
    cfg.budget = 300000;  // lets the elastic net finish its full anneal

    const BenchReport rep = bench_compare(cfg);
    REQUIRE(rep.rows.size() == 12);

    // Instance-major rows, methods in configured order.
    for (int i = 0; i < 3; ++i) {
        for (int m = 0; m < 4; ++m) {
            const BenchRow& r = rep.rows[static_cast<std::size_t>(i * 4 + m)];
            CHECK(r.method == cfg.methods[static_cast<std::size_t>(m)]);
            CHECK(r.instance == rep.rows[static_cast<std::size_t>(i * 4)].instance);
        }
    }
    CHECK(rep.rows[0].instance != rep.rows[4].instance);

    for (const BenchRow& r : rep.rows) {
        CAPTURE(r.instance);
        CAPTURE(r.method);
        REQUIRE(r.gap.has_value());  // n = 4 <= 11, so the optimum is known
        CHECK(*r.gap >= 0.0);
        CHECK(r.evals > 0);
        if (r.method == "en" || r.method == "sa") CHECK(r.tau_total == 0.0);
        if (r.method == "sa") {
            CHECK(r.evals == cfg.budget);  // 4 + 4 * (budget - 4) / 4 exactly
            CHECK(*r.gap == 0.0);
        }
        if (r.method == "en") CHECK(r.evals <= cfg.budget + 4LL * 10);
        // With 4 cities every tour is one 2-opt move from the optimum, so
        // descent alone guarantees the refined rows are exact.
        if (r.method == "en+refine" || r.method == "sa+refine") CHECK(*r.gap == 0.0);
    }

    // Refined rows never report a worse length than their base, and their
    // evaluation counts include the base phase.
    for (int i = 0; i < 3; ++i) {
        const auto row = [&](int m) -> const BenchRow& {
            return rep.rows[static_cast<std::size_t>(i * 4 + m)];
        };
        CHECK(row(2).length <= row(0).length + 1e-12);  // en+refine vs en
        CHECK(row(3).length <= row(1).length + 1e-12);  // sa+refine vs sa
        CHECK(row(2).evals >= row(0).evals);
        CHECK(row(3).evals >= row(1).evals);
    }

    REQUIRE(rep.median_length.size() == 4);
    for (int m = 0; m < 4; ++m)
        CHECK(rep.median_length[static_cast<std::size_t>(m)].first ==
              cfg.methods[static_cast<std::size_t>(m)]);
    // Median of three = middle value; spot-check the sa column.
    std::vector<double> sa_lengths;
    for (const BenchRow& r : rep.rows) {
        if (r.method == "sa") sa_lengths.push_back(r.length);
    }
    std::sort(sa_lengths.begin(), sa_lengths.end());
    CHECK(rep.median_length[1].second == sa_lengths[1]);

    REQUIRE(rep.comparisons.size() == 2);
    CHECK(rep.comparisons[0].first == "en");
    CHECK(rep.comparisons[0].second == "sa");
    CHECK(rep.comparisons[0].wins + rep.comparisons[0].ties + rep.comparisons[0].losses == 3);
    CHECK(rep.comparisons[1].first == "en+refine");
    CHECK(rep.comparisons[1].ties == 3);  // both sides land on the optimum

    // Deterministic: the serialized report (wall time excluded) is identical.
    const BenchReport again = bench_compare(cfg);
    CHECK(bench_csv(again) == bench_csv(rep));
    CHECK(first_line(bench_csv(rep)) == "instance,seed,method,length,gap,evals,tau_total");

    // A single-method run produces no comparisons.
    BenchConfig solo = cfg;
    solo.methods = {"sa"};
    const BenchReport only_sa = bench_compare(solo);
    CHECK(only_sa.rows.size() == 3);
    CHECK(only_sa.median_length.size() == 1);
    CHECK(only_sa.comparisons.empty());
}

// ------------------------------------------------------------------- cli ---

TEST_CASE("cli gen writes deterministic TSPLIB instances") {
    const std::string tsp = spath("g6.tsp");
    const CliResult r = cli("gen --n 6 --seed 9 --out " + tsp);
    CHECK(r.code == 0);
    CHECK(r.output.find("6 cities") != std::string::npos);

    const std::string text = read_file(tsp);
    const TspInstance inst = parse_tsplib(text);
    CHECK(inst.n() == 6);

    const std::string again = spath("g6_again.tsp");
    REQUIRE(cli("gen --n 6 --seed 9 --out " + again).code == 0);
    CHECK(read_file(again) == text);

    const std::string other = spath("g6_other.tsp");
    REQUIRE(cli("gen --n 6 --seed 10 --out " + other).code == 0);
    CHECK(read_file(other) != text);

    CHECK(cli("gen --n 2 --seed 1 --out " + spath("tiny.tsp")).code == 1);
}

TEST_CASE("cli usage errors exit with code 1") {
    CHECK(cli("").code == 1);            // a subcommand is required
    CHECK(cli("frobnicate").code == 1);  // unknown subcommand
    CHECK(cli("gen --n 6 --seed 1").code == 1);  // missing required --out
    CHECK(cli("gen --n 6 --seed 1 --bogus 3 --out " + spath("u.tsp")).code == 1);
    CHECK(cli("solve-sa --in x.tsp --steps 0").code == 1);  // positive check
}

TEST_CASE("cli data errors exit with code 2 and cite the line") {
    const std::string bad = spath("bad.tsp");
    write_file(bad,
               "NAME : bad\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EXPLICIT\n"
               "NODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\nEOF\n");
    const CliResult r = cli("solve-sa --in " + bad + " --steps 10");
    CHECK(r.code == 2);
    CHECK(r.output.find("data error") != std::string::npos);
    CHECK(r.output.find("line 4") != std::string::npos);
}

TEST_CASE("cli io failures exit with code 3") {
    CHECK(cli("solve-en --in " + spath("absent.tsp")).code == 3);
    CHECK(cli("gen --n 5 --seed 1 --out " + spath("no_dir/x.tsp")).code == 3);
}

TEST_CASE("cli elastic net pipeline is reproducible") {
    const std::string tsp = spath("en6.tsp");
    REQUIRE(cli("gen --n 6 --seed 4 --out " + tsp).code == 0);

    const std::string tour = spath("en6.tour");
    const std::string trace = spath("en6_trace.csv");
    const std::string trace_json = spath("en6_trace.json");
    const CliResult r = cli("solve-en --in " + tsp + " --seed 2 --trace-stride 200 --out-tour " +
                            tour + " --trace " + trace + " --trace-json " + trace_json);
    CHECK(r.code == 0);
    CHECK(r.output.rfind("length ", 0) == 0);

    const TspInstance inst = parse_tsplib(read_file(tsp));
    const std::vector<int> order = parse_tour(read_file(tour));
    CHECK(validate_tour(inst, order));

    const std::string trace_text = read_file(trace);
    CHECK(first_line(trace_text) == "iter,k,free_energy,max_city_dist");
    const json mirror = parse_json_text(read_file(trace_json), "trace json");
    REQUIRE(mirror.is_array());
    CHECK(static_cast<long>(mirror.size()) == count_lines(trace_text) - 1);
    CHECK(mirror[0].contains("free_energy"));

    const std::string tour2 = spath("en6_rerun.tour");
    const std::string trace2 = spath("en6_trace_rerun.csv");
    REQUIRE(cli("solve-en --in " + tsp + " --seed 2 --trace-stride 200 --out-tour " + tour2 +
                " --trace " + trace2)
                .code == 0);
    CHECK(read_file(tour2) == read_file(tour));
    CHECK(read_file(trace2) == trace_text);

    // Default output path: <in> with the extension swapped to .tour.
    const CliResult d = cli("solve-en --in " + tsp + " --seed 2");
    CHECK(d.code == 0);
    CHECK(std::filesystem::exists(spath("en6.tour")));
}

TEST_CASE("cli simulated annealing writes schema-true traces") {
    const std::string tsp = spath("sa7.tsp");
    REQUIRE(cli("gen --n 7 --seed 3 --out " + tsp).code == 0);

    const std::string tour = spath("sa7.tour");
    const std::string trace = spath("sa7_trace.csv");
    const CliResult r = cli("solve-sa --in " + tsp + " --seed 6 --steps 2000 --trace-stride 250" +
                            " --out-tour " + tour + " --trace " + trace);
    CHECK(r.code == 0);

    const TspInstance inst = parse_tsplib(read_file(tsp));
    CHECK(validate_tour(inst, parse_tour(read_file(tour))));

    const std::string trace_text = read_file(trace);
    CHECK(first_line(trace_text) == "step,temperature,energy_current,energy_best");
    CHECK(count_lines(trace_text) == 1 + 2000 / 250);

    const std::string trace2 = spath("sa7_trace_rerun.csv");
    REQUIRE(cli("solve-sa --in " + tsp + " --seed 6 --steps 2000 --trace-stride 250 --out-tour " +
                spath("sa7_rerun.tour") + " --trace " + trace2)
                .code == 0);
    CHECK(read_file(trace2) == trace_text);

    CHECK(cli("solve-sa --in " + tsp + " --schedule logarithmic --d 2 --offset 2 --steps 500" +
              " --out-tour " + spath("sa7_log.tour"))
              .code == 0);
}

TEST_CASE("cli refine never worsens a tour and logs hops") {
    const std::string tsp = spath("r8.tsp");
    REQUIRE(cli("gen --n 8 --seed 17 --out " + tsp).code == 0);
    const TspInstance inst = parse_tsplib(read_file(tsp));

    Tour start;
    start.order = {0, 1, 2, 3, 4, 5, 6, 7};
    const std::string start_path = spath("r8_start.tour");
    write_file(start_path, write_tour(start, "start"));

    const std::string refined_path = spath("r8_refined.tour");
    const std::string hops_path = spath("r8_hops.json");
    const CliResult r = cli("refine --in " + tsp + " --tour " + start_path + " --seed 5" +
                            " --out-tour " + refined_path + " --hops-json " + hops_path);
    CHECK(r.code == 0);
    CHECK(r.output.find(" -> ") != std::string::npos);

    const std::vector<int> refined = parse_tour(read_file(refined_path));
    CHECK(validate_tour(inst, refined));
    CHECK(tour_length(inst, refined) <= tour_length(inst, start.order) + 1e-12);

    const json hops = parse_json_text(read_file(hops_path), "hops");
    REQUIRE(hops.is_array());
    for (const json& h : hops) {
        CHECK(h.contains("width"));
        CHECK(h.contains("e_from"));
        CHECK(h.contains("e_to"));
        CHECK(h.contains("tau"));
        CHECK(h["e_to"].get<double>() < h["e_from"].get<double>());
    }

    CHECK(cli("refine --in " + tsp + " --tour " + spath("missing.tour")).code == 3);
    CHECK(cli("refine --in " + tsp + " --tour " + start_path + " --max-width 1").code == 1);
}

TEST_CASE("cli tunnel-sim emits the KMC trace and drift summary") {
    const std::string csv = spath("kmc.csv");
    const std::string summary = spath("kmc_summary.json");
    const CliResult r = cli("tunnel-sim --tmax 3 --trajectories 200 --seed 3 --minima 6 --out " +
                            csv + " --summary-json " + summary);
    CHECK(r.code == 0);

    const std::string trace = read_file(csv);
    CHECK(first_line(trace) == "t,mean_q,stderr_q");
    CHECK(count_lines(trace) == 1 + 201);  // default grid resolution

    const json out = parse_json_text(first_line(r.output), "stdout summary");
    CHECK(out["slope"].is_number());
    CHECK(out["arrived"].is_number());
    CHECK(out["trajectories"] == 200);
    // Zero temperature: the analytic drift formulas do not apply.
    CHECK(out["drift_literal"].is_null());
    CHECK(out["drift_corrected"].is_null());
    const json file_summary = parse_json_text(read_file(summary), "summary file");
    CHECK(file_summary["slope"] == out["slope"]);

    // Finite temperature turns the drift predictions on.
    const CliResult warm = cli("tunnel-sim --tmax 3 --trajectories 100 --seed 3 --minima 6" +
                               std::string(" --beta 2 --out ") + spath("kmc_warm.csv"));
    CHECK(warm.code == 0);
    const json warm_out = parse_json_text(first_line(warm.output), "warm summary");
    CHECK(warm_out["drift_literal"].is_number());
    CHECK(warm_out["drift_corrected"].is_number());

    CHECK(cli("tunnel-sim --beta warm --out " + spath("kmc_bad.csv")).code == 1);

    // Explicit barrier-rate CSV input, including a malformed header.
    const std::string rates = spath("rates.csv");
    write_file(rates, "forward,backward\n2.0,0.0\n1.0,0.0\n");
    const CliResult from_csv =
        cli("tunnel-sim --rates " + rates + " --tmax 5 --trajectories 100 --seed 2 --beta 2" +
            std::string(" --out ") + spath("kmc_rates.csv"));
    CHECK(from_csv.code == 0);
    // Drift predictions need the parametric rate model, not raw rates.
    CHECK(parse_json_text(first_line(from_csv.output), "rates summary")["drift_literal"].is_null());

    const std::string bad_rates = spath("bad_rates.csv");
    write_file(bad_rates, "fwd,bwd\n1,0\n");
    CHECK(cli("tunnel-sim --rates " + bad_rates + " --out " + spath("kmc_bad2.csv")).code == 2);
}

TEST_CASE("cli census reports the exact Hopfield minima") {
    const std::string out = spath("census_hopfield.json");
    const CliResult r =
        cli("census --landscape hopfield --n 10 --patterns 1 --seed 1 --starts 0 --out " + out);
    CHECK(r.code == 0);
    CHECK(r.output.find("minima 2") != std::string::npos);

    const json doc = parse_json_text(read_file(out), "census");
    CHECK(doc["mode"] == "exhaustive");
    CHECK(doc["minima_count"] == 2);
    CHECK(doc["coverage_estimate"] == 1.0);
    REQUIRE(doc["minima"].size() == 2);
    // One stored pattern: exactly the pattern and its global flip, at the
    // same energy.
    std::vector<std::string> states;
    for (const json& m : doc["minima"]) {
        states.push_back(m["state"].get<std::string>());
        CHECK(m["energy"].get<double>() == -4.5);
    }
    std::sort(states.begin(), states.end());
    CHECK(states == std::vector<std::string>{"497", "526"});

    const std::string sg = spath("census_spinglass.json");
    const CliResult rs =
        cli("census --landscape spinglass --n 8 --seed 2 --starts 500 --out " + sg);
    CHECK(rs.code == 0);
    const json sg_doc = parse_json_text(read_file(sg), "census");
    CHECK(sg_doc["mode"] == "sampled");
    CHECK(sg_doc["starts"] == 500);
    CHECK(sg_doc["coverage_estimate"].get<double>() >= 0.0);
    CHECK(sg_doc["coverage_estimate"].get<double>() <= 1.0);

    const std::string tc = spath("census_tour.json");
    CHECK(cli("census --landscape tour --n 5 --seed 3 --starts 0 --out " + tc).code == 0);
    CHECK(parse_json_text(read_file(tc), "census")["minima_count"].get<long>() >= 1);

    // Exhaustive enumeration refuses oversized state spaces.
    CHECK(cli("census --landscape spinglass --n 21 --seed 1 --starts 0 --out " +
              spath("census_too_big.json"))
              .code == 1);
}

TEST_CASE("cli config files reject typos and broken JSON") {
    const std::string tsp = spath("cfg6.tsp");
    REQUIRE(cli("gen --n 6 --seed 8 --out " + tsp).code == 0);

    const std::string typo = spath("cfg_typo.json");
    write_file(typo, "{\"alpha\": 0.2, \"k_men\": 0.01}\n");
    const CliResult r = cli("solve-en --in " + tsp + " --config " + typo);
    CHECK(r.code == 2);
    CHECK(r.output.find("unknown key") != std::string::npos);

    const std::string broken = spath("cfg_broken.json");
    write_file(broken, "{oops\n");
    CHECK(cli("solve-en --in " + tsp + " --config " + broken).code == 2);

    const std::string quick = spath("cfg_quick.json");
    write_file(quick, "{\"max_iters\": 0}\n");
    CHECK(cli("solve-en --in " + tsp + " --config " + quick + " --out-tour " +
              spath("cfg6_quick.tour"))
              .code == 0);
}

TEST_CASE("cli bench writes byte-identical reports per seed") {
    const std::string d1 = spath("bench1");
    const std::string d2 = spath("bench2");
    const CliResult r =
        cli("bench --instances 2 --n 6 --budget 30000 --seed 5 --out-dir " + d1);
    CHECK(r.code == 0);
    CHECK(r.output.find("median en ") != std::string::npos);
    CHECK(r.output.find(" vs ") != std::string::npos);

    const std::string csv = read_file(d1 + "/bench.csv");
    CHECK(first_line(csv) == "instance,seed,method,length,gap,evals,tau_total");
    CHECK(count_lines(csv) == 1 + 2 * 4);
    CHECK(std::filesystem::exists(d1 + "/bench.json"));
    CHECK(std::filesystem::exists(d1 + "/bench_config.json"));

    // n = 6 keeps the optimum known, so the gap column is populated.
    const json rows = parse_json_text(read_file(d1 + "/bench.json"), "bench json")["rows"];
    REQUIRE(rows.size() == 8);
    for (const json& row : rows) CHECK(row["gap"].is_number());

    REQUIRE(cli("bench --instances 2 --n 6 --budget 30000 --seed 5 --out-dir " + d2).code == 0);
    CHECK(read_file(d2 + "/bench.csv") == csv);
}
