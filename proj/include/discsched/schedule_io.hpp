#ifndef DISCSCHED_SCHEDULE_IO_HPP
#define DISCSCHED_SCHEDULE_IO_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "discsched/opt_oracle.hpp"
#include "discsched/simulate.hpp"
#include "discsched/types.hpp"

namespace discsched {

// Schedule file format: {"label": str, "emissions": {"<step>": [[ttl, fee], ...]}}.
// A ttl given as null or the string "inf" stands for unbounded validity and is
// ingested as horizon_hint + 1 (horizon_hint < 0 defers clamping to the caller).
TransactionSchedule schedule_from_json(const nlohmann::json& doc, int horizon_hint = -1);
nlohmann::json schedule_to_json(const TransactionSchedule& schedule);
TransactionSchedule load_schedule(const std::string& path, int horizon_hint = -1);

// Trace format: {"label", "lambda", "gamma", "seed", "revenue",
//                "choices": [[step, ttl, fee] | [step, null]]}.
nlohmann::json trace_to_json(const SimulationTrace& trace, const MinerParams& params,
                             std::uint64_t seed);

// Assignment dump: "tx_arrival,tx_ttl,tx_fee,slot,weight" rows.
std::string assignment_csv(const OptResult& result, const MinerParams& params);

// 17 significant digits (round-trip exact for doubles).
std::string format_double(double value);

// Write via a temp file + rename so readers never see partial output.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

} // namespace discsched

#endif
