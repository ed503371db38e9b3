#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "scenav/nn/dense_net.hpp"
#include "scenav/nn/policy.hpp"

namespace scenav::nn {

/// Named networks plus free-form metadata. On disk:
///
///   scenav-checkpoint 1
///   meta <key> <value>
///   net <name> <layer count>
///   layer <out> <in> <relu|identity>
///   w <in hexfloats>        (one line per output row)
///   b <out hexfloats>
///   end
///
/// Values are written as C99 hexadecimal floats, so a load reproduces every
/// weight bit for bit.
struct Checkpoint {
  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, DenseNet>> nets;

  const DenseNet& net(const std::string& name) const;
  bool has_net(const std::string& name) const;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(const std::string& text, const std::string& origin = "<memory>");

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

Checkpoint to_checkpoint(const PolicyBundle& bundle);
/// Throws CheckpointError on a topology that breaks the bundle contract.
PolicyBundle to_bundle(const Checkpoint& ckpt);

void save_checkpoint(const PolicyBundle& bundle, const std::filesystem::path& path);
PolicyBundle load_policy_bundle(const std::filesystem::path& path);

}  // namespace scenav::nn
