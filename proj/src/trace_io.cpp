#include "poolshare/trace_io.hpp"

#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace poolshare {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const Num& x : row) r.push_back(x.to_string());
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
  Matrix m;
  for (const auto& row : j) {
    if (!row.is_array()) {
      throw std::invalid_argument(std::string(what) + ": expected an array of arrays");
    }
    std::vector<Num> r;
    for (const auto& x : row) r.push_back(Num::parse(x.get<std::string>()));
    m.push_back(std::move(r));
  }
  return m;
}

json instance_to_json_obj(const Instance& instance) {
  json j;
  json e = json::array();
  for (const Num& x : instance.endowments) e.push_back(x.to_string());
  j["endowments"] = std::move(e);
  j["demands"] = matrix_to_json(instance.demands);
  if (instance.true_demands) j["true_demands"] = matrix_to_json(*instance.true_demands);
  return j;
}

Instance instance_from_json_obj(const json& j) {
  Instance inst;
  for (const auto& x : j.at("endowments")) inst.endowments.push_back(Num::parse(x.get<std::string>()));
  inst.demands = matrix_from_json(j.at("demands"), "demands");
  if (j.contains("true_demands")) {
    inst.true_demands = matrix_from_json(j.at("true_demands"), "true_demands");
  }
  inst.validate();
  return inst;
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  return instance_to_json_obj(instance).dump(2);
}

Instance instance_from_json(const std::string& text) {
  return instance_from_json_obj(json::parse(text));
}

std::string trace_file_to_json(const TraceFile& tf) {
  json j;
  j["schema_id"] = kTraceSchemaId;
  j["mechanism"] = tf.mechanism;
  if (tf.alpha) j["alpha"] = tf.alpha->to_string();
  j["instance"] = instance_to_json_obj(tf.instance);
  j["allocations"] = matrix_to_json(tf.trace.alloc);
  j["credits"] = matrix_to_json(tf.trace.credits);
  j["utilities"] = matrix_to_json(tf.trace.util);
  j["cumulative_utilities"] = matrix_to_json(tf.trace.cum_util);
  if (tf.rng) j["rng"] = *tf.rng;
  if (tf.seed) j["seed"] = *tf.seed;
  return j.dump(2);
}

TraceFile trace_file_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("schema_id") || j["schema_id"].get<std::string>() != kTraceSchemaId) {
    throw std::invalid_argument("trace file: unknown or missing schema_id");
  }
  TraceFile tf;
  tf.mechanism = j.at("mechanism").get<std::string>();
  if (j.contains("alpha")) tf.alpha = Num::parse(j["alpha"].get<std::string>());
  tf.instance = instance_from_json_obj(j.at("instance"));
  tf.trace.alloc = matrix_from_json(j.at("allocations"), "allocations");
  tf.trace.credits = matrix_from_json(j.at("credits"), "credits");
  tf.trace.util = matrix_from_json(j.at("utilities"), "utilities");
  tf.trace.cum_util = matrix_from_json(j.at("cumulative_utilities"), "cumulative_utilities");
  if (j.contains("rng")) tf.rng = j["rng"].get<std::string>();
  if (j.contains("seed")) tf.seed = j["seed"].get<std::uint64_t>();
  validate_trace(tf.instance, tf.trace);
  return tf;
}

void write_trace_csv(std::ostream& os, const Instance& instance, const AllocationTrace& trace) {
  os << "round,agent,demand,allocation,utility,cumulative_utility,credit_before,credit_after\n";
  for (std::size_t t = 0; t < instance.rounds(); ++t) {
    for (std::size_t i = 0; i < instance.agents(); ++i) {
      os << (t + 1) << ',' << (i + 1) << ',' << instance.demands[t][i].to_decimal() << ','
         << trace.alloc[t][i].to_decimal() << ',' << trace.util[t][i].to_decimal() << ','
         << trace.cum_util[t][i].to_decimal() << ',' << trace.credits[t][i].to_decimal() << ','
         << trace.credits[t + 1][i].to_decimal() << '\n';
    }
  }
}

}  // namespace poolshare
