#include "poolshare/workloads.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "poolshare/rng.hpp"

namespace poolshare {

namespace {

// Shared agent filters: drop constant rows, then rows with mean below the
// threshold, then apply the agent cap. Demands are column-per-agent; ids
// travel along so policies stay deterministic. Returns surviving column
// indices in final order.
std::vector<std::size_t> filter_agents(const Matrix& demands, const std::vector<std::string>& ids,
                                       const WorkloadConfig& config) {
  const std::size_t T = demands.size();
  std::vector<std::size_t> keep;
  std::vector<Num> totals;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    bool constant = true;
    Num total(0);
    for (std::size_t t = 0; t < T; ++t) {
      total += demands[t][i];
      if (demands[t][i] != demands[0][i]) constant = false;
    }
    if (constant) continue;
    if (total / Num(static_cast<long>(T)) < config.min_mean_demand) continue;
    keep.push_back(i);
    totals.push_back(total);
  }
  if (config.max_agents != 0 && keep.size() > config.max_agents) {
    if (config.cap_policy == AgentCapPolicy::TopByTotalDemand) {
      std::vector<std::size_t> order(keep.size());
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (totals[a] != totals[b]) return totals[b] < totals[a];
        return ids[keep[a]] < ids[keep[b]];
      });
      order.resize(config.max_agents);
      std::vector<std::size_t> chosen;
      for (std::size_t k : order) chosen.push_back(keep[k]);
      std::sort(chosen.begin(), chosen.end());
      keep = std::move(chosen);
    } else {
      SplitMix64 rng(config.seed);
      std::vector<std::size_t> pool = keep;
      for (std::size_t k = pool.size() - 1; k > 0; --k) {
        std::size_t j = rng.next_below(k + 1);
        std::swap(pool[k], pool[j]);
      }
      pool.resize(config.max_agents);
      std::sort(pool.begin(), pool.end());
      keep = std::move(pool);
    }
  }
  return keep;
}

Instance build_instance(const Matrix& demands, const std::vector<std::string>& ids,
                        const WorkloadConfig& config) {
  if (demands.empty()) throw std::invalid_argument("workload: no rounds");
  std::vector<std::size_t> keep = filter_agents(demands, ids, config);
  if (keep.empty()) throw std::invalid_argument("workload: no agents survive the filters");
  Instance inst;
  inst.demands.assign(demands.size(), std::vector<Num>(keep.size()));
  for (std::size_t t = 0; t < demands.size(); ++t) {
    for (std::size_t k = 0; k < keep.size(); ++k) inst.demands[t][k] = demands[t][keep[k]];
  }
  const Num T(static_cast<long>(demands.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    Num total(0);
    for (std::size_t t = 0; t < demands.size(); ++t) total += inst.demands[t][k];
    inst.endowments.push_back(total / T);
  }
  inst.validate();
  return inst;
}

}  // namespace

Instance bucket_trace(std::vector<TaskEvent> events, const WorkloadConfig& config) {
  if (events.empty()) throw std::invalid_argument("bucket_trace: empty event stream");
  if (config.round_length_us <= 0) {
    throw std::invalid_argument("bucket_trace: round length must be positive");
  }
  for (const TaskEvent& ev : events) {
    if (ev.timestamp_us < 0) throw std::invalid_argument("bucket_trace: negative timestamp");
    if (ev.cpu_request.is_negative()) {
      throw std::invalid_argument("bucket_trace: negative cpu request");
    }
  }

  std::vector<std::string> ids;
  for (const TaskEvent& ev : events) ids.push_back(ev.agent_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < ids.size(); ++i) col[ids[i]] = i;

  std::int64_t bucket_min = events[0].timestamp_us / config.round_length_us;
  std::int64_t bucket_max = bucket_min;
  for (const TaskEvent& ev : events) {
    std::int64_t b = ev.timestamp_us / config.round_length_us;
    bucket_min = std::min(bucket_min, b);
    bucket_max = std::max(bucket_max, b);
  }
  std::size_t rounds = static_cast<std::size_t>(bucket_max - bucket_min + 1);
  if (config.max_rounds != 0) rounds = std::min(rounds, config.max_rounds);

  Matrix demands(rounds, std::vector<Num>(ids.size(), Num(0)));
  for (const TaskEvent& ev : events) {
    std::size_t b = static_cast<std::size_t>(ev.timestamp_us / config.round_length_us - bucket_min);
    if (b >= rounds) continue;  // beyond the round cap
    demands[b][col[ev.agent_id]] += ev.cpu_request;
  }
  return build_instance(demands, ids, config);
}

Instance synth_bursty(const WorkloadConfig& config) {
  if (config.agents == 0 || config.rounds == 0) {
    throw std::invalid_argument("synth_bursty: agents and rounds must be positive");
  }
  if (config.amplitude_steps == 0) {
    throw std::invalid_argument("synth_bursty: amplitude_steps must be positive");
  }
  if (config.mean_episode_rounds == 0) {
    throw std::invalid_argument("synth_bursty: mean_episode_rounds must be positive");
  }
  if (config.burst_amplitude < Num(1) || config.burst_amplitude > Num(2)) {
    throw std::invalid_argument("synth_bursty: burst_amplitude must lie in [1, 2]");
  }
  SplitMix64 rng(config.seed);
  const std::size_t T = config.rounds;
  const std::size_t n = config.agents;

  // Pool-wide phase chain: flip with probability 1/mean_episode_rounds.
  std::vector<bool> busy(T);
  busy[0] = rng.next_bool();
  for (std::size_t t = 1; t < T; ++t) {
    bool flip = rng.next_below(config.mean_episode_rounds) == 0;
    busy[t] = flip ? !busy[t - 1] : busy[t - 1];
  }

  // Integer base levels; these become the endowments exactly.
  std::vector<Num> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = Num(static_cast<long>(1 + rng.next_below(8)));

  std::vector<std::size_t> hot, cold;
  for (std::size_t t = 0; t < T; ++t) (busy[t] ? hot : cold).push_back(t);
  const std::size_t pairs = std::min(hot.size(), cold.size());

  Matrix demands(T, std::vector<Num>(n));
  for (std::size_t t = 0; t < T; ++t) demands[t] = base;  // unpaired rounds stay at base
  const Num gain = config.burst_amplitude - Num(1);
  const long q = static_cast<long>(config.amplitude_steps);
  for (std::size_t j = 0; j < pairs; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      Num z(static_cast<long>(1 + rng.next_below(config.amplitude_steps)), q);
      Num swing = gain * z * base[i];
      demands[hot[j]][i] = base[i] + swing;
      demands[cold[j]][i] = base[i] - swing;
    }
  }

  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = "synth-" + std::to_string(i);
  WorkloadConfig filter_cfg = config;
  filter_cfg.max_agents = 0;  // the generator's size is authoritative
  return build_instance(demands, ids, filter_cfg);
}

const std::map<std::string, Instance>& bundled_instances() {
  static const std::map<std::string, Instance> catalog = [] {
    std::map<std::string, Instance> m;
    auto mat = [](std::initializer_list<std::initializer_list<long>> rows) {
      Matrix out;
      for (const auto& r : rows) {
        std::vector<Num> row;
        for (long v : r) row.emplace_back(v);
        out.push_back(std::move(row));
      }
      return out;
    };

    // Three equal agents; two heavy users starve the third's spare capacity
    // claim unless the mechanism settles debts over time.
    m["motivating_example"] =
        Instance{{Num(1), Num(1), Num(1)}, mat({{2, 2, 0}, {2, 2, 0}, {2, 2, 6}}), std::nullopt};

    // Two agents, two rounds; the round-2 allocation forced by per-round
    // max-min cannot be squared with any credit ledger.
    m["prop43"] = Instance{{Num(1), Num(1)}, mat({{0, 2}, {2, 2}}), std::nullopt};

    // Three agents, five rounds; truthful play is the baseline for the
    // first-round underreport below.
    m["thm44"] = Instance{{Num(1), Num(1), Num(1)},
                          mat({{1, 3, 0}, {2, 0, 2}, {0, 1, 2}, {0, 1, 2}, {3, 2, 0}}),
                          std::nullopt};

    // Same instance, but agent 1 reports 0 in round 1 (true demands kept):
    // the deferred claim raises its true-demand utility from 4 to 4.5.
    m["thm44_misreport"] = Instance{
        {Num(1), Num(1), Num(1)},
        mat({{0, 3, 0}, {2, 0, 2}, {0, 1, 2}, {0, 1, 2}, {3, 2, 0}}),
        mat({{1, 3, 0}, {2, 0, 2}, {0, 1, 2}, {0, 1, 2}, {3, 2, 0}})};
    return m;
  }();
  return catalog;
}

Instance bundled_instance(const std::string& name) {
  const auto& catalog = bundled_instances();
  auto it = catalog.find(name);
  if (it == catalog.end()) {
    throw std::invalid_argument("unknown bundled instance \"" + name + "\"");
  }
  return it->second;
}

std::vector<TaskEvent> read_task_events_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("task csv: empty input");
  if (line.ends_with("\r")) line.pop_back();
  if (line != "timestamp_us,agent_id,cpu_request") {
    throw std::invalid_argument("task csv: expected header timestamp_us,agent_id,cpu_request");
  }
  std::vector<TaskEvent> events;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.ends_with("\r")) line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string ts, id, req;
    if (!std::getline(row, ts, ',') || !std::getline(row, id, ',') || !std::getline(row, req)) {
      throw std::invalid_argument("task csv: malformed line " + std::to_string(lineno));
    }
    TaskEvent ev;
    try {
      ev.timestamp_us = std::stoll(ts);
    } catch (const std::exception&) {
      throw std::invalid_argument("task csv: bad timestamp on line " + std::to_string(lineno));
    }
    ev.agent_id = id;
    ev.cpu_request = Num::parse(req);
    events.push_back(std::move(ev));
  }
  return events;
}

}  // namespace poolshare
