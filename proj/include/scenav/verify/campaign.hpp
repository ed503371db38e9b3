#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "scenav/nn/dense_net.hpp"
#include "scenav/verify/verifier.hpp"

namespace scenav::verify {

struct Model {
  std::string id;
  std::string mode;  // training mode label, "unknown" when absent
  nn::DenseNet policy;
};

/// Loads the "policy" net of a checkpoint and its mode label.
Model load_model(const std::filesystem::path& path);

struct CampaignRow {
  std::string model_id;
  std::string mode;
  std::string property;
  std::string verdict;  // a verdict name, or "Error"
  SearchStats stats;
  double wall_ms = 0.0;
  std::string detail;
};

struct CampaignResult {
  std::vector<CampaignRow> rows;
  /// mode -> property -> verdict -> count
  std::map<std::string, std::map<std::string, std::map<std::string, int>>> counts;

  int count(const std::string& mode, const std::string& property, const std::string& verdict) const;
};

/// Every (model, query) pair in order. A failing item becomes an "Error" row.
CampaignResult campaign(const std::vector<Model>& models, const std::vector<PropertyQuery>& queries,
                        const Budget& budget);

/// Same, loading checkpoints first; load failures are recorded per query.
CampaignResult campaign(const std::vector<std::filesystem::path>& checkpoints,
                        const std::vector<PropertyQuery>& queries, const Budget& budget);

/// Tab-separated, one header line:
/// model_id mode property verdict splits trials discharged undecided wall_ms detail
void write_table(std::ostream& os, const CampaignResult& result);
void write_summary(std::ostream& os, const CampaignResult& result);

}  // namespace scenav::verify
