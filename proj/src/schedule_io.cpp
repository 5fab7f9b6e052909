#include "discsched/schedule_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace discsched {

TransactionSchedule schedule_from_json(const nlohmann::json& doc, int horizon_hint) {
    TransactionSchedule schedule;
    schedule.label = doc.value("label", "");
    if (!doc.contains("emissions")) return schedule;
    for (const auto& [key, txs] : doc.at("emissions").items()) {
        const int step = std::stoi(key);
        for (const auto& pair : txs) {
            int ttl;
            const auto& raw_ttl = pair.at(0);
            if (raw_ttl.is_null() || (raw_ttl.is_string() && raw_ttl.get<std::string>() == "inf")) {
                ttl = horizon_hint >= 0 ? horizon_hint + 1 : std::numeric_limits<int>::max() - 1;
            } else {
                ttl = raw_ttl.get<int>();
            }
            schedule.emit(step, make_transaction(ttl, pair.at(1).get<double>()));
        }
    }
    return schedule;
}

nlohmann::json schedule_to_json(const TransactionSchedule& schedule) {
    nlohmann::json emissions = nlohmann::json::object();
    for (const auto& [step, txs] : schedule.emissions) {
        nlohmann::json list = nlohmann::json::array();
        for (const Transaction& tx : txs) {
            list.push_back({tx.ttl, tx.fee});
        }
        emissions[std::to_string(step)] = std::move(list);
    }
    return nlohmann::json{{"label", schedule.label}, {"emissions", std::move(emissions)}};
}

TransactionSchedule load_schedule(const std::string& path, int horizon_hint) {
    return schedule_from_json(nlohmann::json::parse(read_file(path)), horizon_hint);
}

nlohmann::json trace_to_json(const SimulationTrace& trace, const MinerParams& params,
                             std::uint64_t seed) {
    nlohmann::json choices = nlohmann::json::array();
    for (const auto& [step, tx] : trace.choices) {
        if (tx.has_value()) {
            choices.push_back({step, tx->ttl, tx->fee});
        } else {
            choices.push_back({step, nullptr});
        }
    }
    return nlohmann::json{{"label", trace.schedule_label},
                          {"lambda", params.lambda},
                          {"gamma", params.gamma},
                          {"seed", seed},
                          {"revenue", trace.revenue},
                          {"choices", std::move(choices)}};
}

std::string assignment_csv(const OptResult& result, const MinerParams& params) {
    std::string csv = "tx_arrival,tx_ttl,tx_fee,slot,weight\n";
    for (const auto& [tx, slot] : result.assignment) {
        const TxInstance& inst = result.txs[tx];
        csv += std::to_string(inst.arrival) + ',' + std::to_string(inst.ttl) + ',' +
               format_double(inst.fee) + ',' + std::to_string(slot) + ',' +
               format_double(params.weight(slot) * inst.fee) + '\n';
    }
    return csv;
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " + tmp);
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("write failed: " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace discsched
