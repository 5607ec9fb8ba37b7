#include "qtsp/emit.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qtsp/errors.hpp"

namespace qtsp {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string en_trace_csv(const std::vector<EnTraceRow>& rows) {
    std::string out = "iter,k,free_energy,max_city_dist\n";
    for (const EnTraceRow& r : rows) {
        out += std::to_string(r.iter) + "," + fmt_double(r.k) + "," + fmt_double(r.free_energy) +
               "," + fmt_double(r.max_city_dist) + "\n";
    }
    return out;
}

std::string sa_trace_csv(const std::vector<SaTraceRow>& rows) {
    std::string out = "step,temperature,energy_current,energy_best\n";
    for (const SaTraceRow& r : rows) {
        out += std::to_string(r.step) + "," + fmt_double(r.temperature) + "," +
               fmt_double(r.energy_current) + "," + fmt_double(r.energy_best) + "\n";
    }
    return out;
}

std::string kmc_trace_csv(const KmcStats& stats) {
    std::string out = "t,mean_q,stderr_q\n";
    for (std::size_t i = 0; i < stats.t_grid.size(); ++i) {
        out += fmt_double(stats.t_grid[i]) + "," + fmt_double(stats.mean_q[i]) + "," +
               fmt_double(stats.stderr_q[i]) + "\n";
    }
    return out;
}

nlohmann::json en_trace_json(const std::vector<EnTraceRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const EnTraceRow& r : rows) {
        arr.push_back({{"iter", r.iter},
                       {"k", r.k},
                       {"free_energy", r.free_energy},
                       {"max_city_dist", r.max_city_dist}});
    }
    return arr;
}

nlohmann::json sa_trace_json(const std::vector<SaTraceRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SaTraceRow& r : rows) {
        arr.push_back({{"step", r.step},
                       {"temperature", r.temperature},
                       {"energy_current", r.energy_current},
                       {"energy_best", r.energy_best}});
    }
    return arr;
}

nlohmann::json kmc_trace_json(const KmcStats& stats) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < stats.t_grid.size(); ++i) {
        arr.push_back(
            {{"t", stats.t_grid[i]}, {"mean_q", stats.mean_q[i]}, {"stderr_q", stats.stderr_q[i]}});
    }
    return arr;
}

nlohmann::json hops_json(const std::vector<HopRecord>& hops) {
    nlohmann::json arr = nlohmann::json::array();
    for (const HopRecord& h : hops) {
        arr.push_back(
            {{"width", h.width}, {"e_from", h.e_from}, {"e_to", h.e_to}, {"tau", h.tau}});
    }
    return arr;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return buf.str();
}

}  // namespace qtsp
