#include "scenav/verify/campaign.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

#include "scenav/nn/checkpoint.hpp"

namespace scenav::verify {

Model load_model(const std::filesystem::path& path) {
  const auto ckpt = nn::load_checkpoint(path);
  if (!ckpt.has_net("policy")) throw nn::CheckpointError(path.string() + ": no 'policy' network");
  const auto it = ckpt.metadata.find("mode");
  return {path.stem().string(), it == ckpt.metadata.end() ? "unknown" : it->second, ckpt.net("policy")};
}

int CampaignResult::count(const std::string& mode, const std::string& property, const std::string& verdict) const {
  const auto m = counts.find(mode);
  if (m == counts.end()) return 0;
  const auto p = m->second.find(property);
  if (p == m->second.end()) return 0;
  const auto v = p->second.find(verdict);
  return v == p->second.end() ? 0 : v->second;
}

namespace {

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

std::string witness_detail(const Witness& w) {
  std::ostringstream os;
  os << std::setprecision(17) << w.case_label << ':';
  for (std::size_t i = 0; i < w.inputs.size(); ++i) {
    os << (i ? " ->" : "") << " x=[";
    for (Eigen::Index j = 0; j < w.inputs[i].size(); ++j) os << (j ? "," : "") << w.inputs[i][j];
    os << "] y=[";
    for (Eigen::Index j = 0; j < w.outputs[i].size(); ++j) os << (j ? "," : "") << w.outputs[i][j];
    os << ']';
  }
  return os.str();
}

void add(CampaignResult& r, CampaignRow row) {
  ++r.counts[row.mode][row.property][row.verdict];
  r.rows.push_back(std::move(row));
}

}  // namespace

CampaignResult campaign(const std::vector<Model>& models, const std::vector<PropertyQuery>& queries,
                        const Budget& budget) {
  budget.validate();
  CampaignResult r;
  for (const auto& m : models) {
    for (const auto& q : queries) {
      CampaignRow row{m.id, m.mode, q.name, "Error", {}, 0.0, ""};
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const Verdict v = verify(m.policy, q, budget);
        row.verdict = std::string(verdict_name(v.kind));
        row.stats = v.stats;
        if (v.witness) row.detail = witness_detail(*v.witness);
      } catch (const std::exception& e) {
        row.detail = one_line(e.what());
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      add(r, std::move(row));
    }
  }
  return r;
}

CampaignResult campaign(const std::vector<std::filesystem::path>& checkpoints,
                        const std::vector<PropertyQuery>& queries, const Budget& budget) {
  budget.validate();
  CampaignResult r;
  for (const auto& path : checkpoints) {
    Model m;
    try {
      m = load_model(path);
    } catch (const std::exception& e) {
      for (const auto& q : queries) add(r, {path.stem().string(), "unknown", q.name, "Error", {}, 0.0, one_line(e.what())});
      continue;
    }
    auto part = campaign(std::vector<Model>{std::move(m)}, queries, budget);
    for (auto& row : part.rows) add(r, std::move(row));
  }
  return r;
}

void write_table(std::ostream& os, const CampaignResult& r) {
  os << "model_id\tmode\tproperty\tverdict\tsplits\ttrials\tdischarged\tundecided\twall_ms\tdetail\n";
  for (const auto& row : r.rows) {
    os << row.model_id << '\t' << row.mode << '\t' << row.property << '\t' << row.verdict << '\t' << row.stats.splits
       << '\t' << row.stats.trials << '\t' << row.stats.discharged << '\t' << row.stats.undecided << '\t'
       << std::fixed << std::setprecision(1) << row.wall_ms << std::defaultfloat << '\t' << row.detail << '\n';
  }
}

void write_summary(std::ostream& os, const CampaignResult& r) {
  for (const auto& [mode, props] : r.counts) {
    for (const auto& [prop, verdicts] : props) {
      os << mode << ' ' << prop << ':';
      for (const char* v : {"Verified", "Falsified", "Unknown", "Error"}) {
        const auto it = verdicts.find(v);
        os << ' ' << v << '=' << (it == verdicts.end() ? 0 : it->second);
      }
      os << '\n';
    }
  }
}

}  // namespace scenav::verify
