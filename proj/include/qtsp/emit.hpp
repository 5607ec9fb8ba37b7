#pragma once

#include <string>
#include <vector>

#include "qtsp/annealing.hpp"
#include "qtsp/elastic_net.hpp"
#include "qtsp/format.hpp"
#include "qtsp/refiner.hpp"
#include "qtsp/tunneling.hpp"

#include "json.hpp"

namespace qtsp {

// CSV bodies, header line first, '\n' terminated.
std::string en_trace_csv(const std::vector<EnTraceRow>& rows);    // iter,k,free_energy,max_city_dist
std::string sa_trace_csv(const std::vector<SaTraceRow>& rows);    // step,temperature,energy_current,energy_best
std::string kmc_trace_csv(const KmcStats& stats);                 // t,mean_q,stderr_q

// JSON mirrors: array of one object per row, same keys as the CSV columns.
nlohmann::json en_trace_json(const std::vector<EnTraceRow>& rows);
nlohmann::json sa_trace_json(const std::vector<SaTraceRow>& rows);
nlohmann::json kmc_trace_json(const KmcStats& stats);

// Hop log for the refine subcommand: [{width, e_from, e_to, tau}].
nlohmann::json hops_json(const std::vector<HopRecord>& hops);

// Whole-file write; throws IoError naming the path.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);  // IoError on failure

}  // namespace qtsp
