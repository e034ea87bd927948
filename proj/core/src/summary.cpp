#include "tsnsim/summary.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

namespace tsnsim {

RunSummary summarize(const std::map<std::string, FlowSeries>& series,
                     const std::map<std::string, SimTime>& baselines, SimTime tolerance) {
  if (tolerance < SimTime::ns(0)) {
    throw SimError("tolerance must be non-negative");
  }
  RunSummary out;
  auto stats_for = [&](const std::string& id, const FlowSeries* s) {
    FlowStats fs;
    fs.flow_id = id;
    fs.tolerance = tolerance;
    auto bit = baselines.find(id);
    fs.baseline = bit == baselines.end() ? SimTime::ns(0) : bit->second;
    if (s && !s->samples.empty()) {
      fs.count = s->samples.size();
      fs.min_latency = s->samples.front().latency;
      fs.max_latency = s->samples.front().latency;
      double sum = 0;
      for (const LatencySample& smp : s->samples) {
        fs.min_latency = std::min(fs.min_latency, smp.latency);
        fs.max_latency = std::max(fs.max_latency, smp.latency);
        sum += static_cast<double>(smp.latency.count());
        if (smp.latency > fs.baseline + tolerance) {
          ++fs.violation_count;
          if (!fs.first_violation) fs.first_violation = smp.recv_time;
          fs.last_violation = smp.recv_time;
        }
      }
      fs.mean_latency_ns = sum / static_cast<double>(fs.count);
    }
    return fs;
  };

  for (const auto& [id, baseline] : baselines) {
    auto sit = series.find(id);
    out.flows.push_back(stats_for(id, sit == series.end() ? nullptr : &sit->second));
  }
  for (const auto& [id, s] : series) {
    if (!baselines.contains(id)) {
      out.flows.push_back(stats_for(id, &s));
    }
  }
  return out;
}

std::string summary_to_json(const RunSummary& summary) {
  nlohmann::ordered_json j;
  j["frames"]["created"] = summary.frames_created;
  j["frames"]["received"] = summary.frames_received;
  j["frames"]["dropped"] = summary.frames_dropped;
  j["flows"] = nlohmann::ordered_json::array();
  for (const FlowStats& f : summary.flows) {
    nlohmann::ordered_json jf;
    jf["flow_id"] = f.flow_id;
    jf["count"] = f.count;
    jf["min_latency_ns"] = f.count ? f.min_latency.count() : 0;
    jf["max_latency_ns"] = f.count ? f.max_latency.count() : 0;
    jf["mean_latency_ns"] = f.mean_latency_ns;
    jf["baseline_ns"] = f.baseline.count();
    jf["tolerance_ns"] = f.tolerance.count();
    jf["violation_count"] = f.violation_count;
    if (f.first_violation) jf["first_violation_s"] = format_seconds(*f.first_violation);
    if (f.last_violation) jf["last_violation_s"] = format_seconds(*f.last_violation);
    jf["created"] = f.created;
    jf["dropped"] = f.dropped;
    j["flows"].push_back(std::move(jf));
  }
  j["transactions"] = nlohmann::ordered_json::array();
  for (const TxnSummary& t : summary.transactions) {
    nlohmann::ordered_json jt;
    jt["label"] = t.label;
    jt["outcome"] = t.outcome;
    jt["committed"] = t.committed;
    if (t.commit_instant) jt["commit_instant_ns"] = t.commit_instant->count();
    j["transactions"].push_back(std::move(jt));
  }
  return j.dump(2) + "\n";
}

std::string series_to_csv(const FlowSeries& series) {
  std::ostringstream out;
  out << "flow_id,recv_time_s,latency_s\n";
  for (const LatencySample& s : series.samples) {
    out << series.flow_id << "," << format_seconds(s.recv_time) << "," << format_seconds(s.latency)
        << "\n";
  }
  return out.str();
}

}  // namespace tsnsim
