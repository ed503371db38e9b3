#include "scenav/nn/checkpoint.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace scenav::nn {

namespace {

constexpr const char* kMagic = "scenav-checkpoint";
constexpr int kVersion = 1;

void write_row(std::ostream& out, const char* tag, const double* data, Eigen::Index n) {
  out << tag;
  for (Eigen::Index i = 0; i < n; ++i) out << ' ' << data[i];
  out << '\n';
}

class LineReader {
 public:
  LineReader(const std::string& text, std::string origin) : in_(text), origin_(std::move(origin)) {}

  std::istringstream next(const std::string& expected_tag) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string tag;
      ls >> tag;
      if (tag != expected_tag) fail("expected '" + expected_tag + "', found '" + tag + "'");
      return ls;
    }
    fail("unexpected end of file, expected '" + expected_tag + "'");
    return {};
  }

  std::string peek_tag() {
    const auto pos = in_.tellg();
    const int saved = lineno_;
    std::string line, tag;
    while (std::getline(in_, line)) {
      std::istringstream ls(line);
      if (ls >> tag) break;
    }
    in_.clear();
    in_.seekg(pos);
    lineno_ = saved;
    return tag;
  }

  std::vector<double> numbers(std::istringstream& ls, std::size_t count) {
    std::vector<double> v;
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const double x = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') fail("bad number '" + tok + "'");
      v.push_back(x);
    }
    if (v.size() != count) {
      fail("expected " + std::to_string(count) + " values, got " + std::to_string(v.size()));
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw CheckpointError(origin_ + ":" + std::to_string(lineno_) + ": " + why);
  }

 private:
  std::istringstream in_;
  std::string origin_;
  int lineno_ = 0;
};

}  // namespace

const DenseNet& Checkpoint::net(const std::string& name) const {
  for (const auto& [n, net] : nets) {
    if (n == name) return net;
  }
  throw CheckpointError("checkpoint has no network '" + name + "'");
}

bool Checkpoint::has_net(const std::string& name) const {
  for (const auto& entry : nets) {
    if (entry.first == name) return true;
  }
  return false;
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n';
  for (const auto& [k, v] : ckpt.metadata) {
    if (k.find_first_of(" \t\n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw CheckpointError("metadata key/value not representable: '" + k + "'");
    }
    out << "meta " << k << ' ' << v << '\n';
  }
  out << std::hexfloat;
  for (const auto& [name, net] : ckpt.nets) {
    out << "net " << name << ' ' << net.layers().size() << '\n';
    for (const auto& l : net.layers()) {
      out << "layer " << l.weight.rows() << ' ' << l.weight.cols() << ' '
          << (l.activation == Activation::ReLU ? "relu" : "identity") << '\n';
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = l.weight;
      for (Eigen::Index r = 0; r < w.rows(); ++r) write_row(out, "w", w.row(r).data(), w.cols());
      write_row(out, "b", l.bias.data(), l.bias.size());
    }
  }
  out << "end\n";
  return out.str();
}

Checkpoint parse_checkpoint(const std::string& text, const std::string& origin) {
  LineReader reader(text, origin);
  Checkpoint ckpt;
  {
    auto ls = reader.next(kMagic);
    int version = 0;
    if (!(ls >> version) || version != kVersion) reader.fail("unsupported checkpoint version");
  }
  for (;;) {
    const std::string tag = reader.peek_tag();
    if (tag == "meta") {
      auto ls = reader.next("meta");
      std::string key, value;
      ls >> key;
      std::getline(ls >> std::ws, value);
      ckpt.metadata[key] = value;
    } else if (tag == "net") {
      auto ls = reader.next("net");
      std::string name;
      int count = 0;
      if (!(ls >> name >> count) || count <= 0) reader.fail("malformed net header");
      std::vector<DenseLayer> layers;
      for (int i = 0; i < count; ++i) {
        auto hs = reader.next("layer");
        long rows = 0, cols = 0;
        std::string act;
        if (!(hs >> rows >> cols >> act) || rows <= 0 || cols <= 0) reader.fail("malformed layer header");
        DenseLayer l;
        if (act == "relu") {
          l.activation = Activation::ReLU;
        } else if (act == "identity") {
          l.activation = Activation::Identity;
        } else {
          reader.fail("unknown activation '" + act + "'");
        }
        l.weight.resize(rows, cols);
        for (long r = 0; r < rows; ++r) {
          auto ws = reader.next("w");
          const auto v = reader.numbers(ws, static_cast<std::size_t>(cols));
          for (long c = 0; c < cols; ++c) l.weight(r, c) = v[static_cast<std::size_t>(c)];
        }
        auto bs = reader.next("b");
        const auto v = reader.numbers(bs, static_cast<std::size_t>(rows));
        l.bias = Eigen::Map<const Eigen::VectorXd>(v.data(), rows);
        layers.push_back(std::move(l));
      }
      try {
        ckpt.nets.emplace_back(name, DenseNet(std::move(layers)));
      } catch (const std::invalid_argument& e) {
        reader.fail(std::string("network '") + name + "': " + e.what());
      }
    } else if (tag == "end") {
      reader.next("end");
      return ckpt;
    } else {
      reader.fail(tag.empty() ? "missing 'end'" : "unexpected '" + tag + "'");
    }
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint '" + path.string() + "'");
  out << serialize_checkpoint(ckpt);
  if (!out) throw CheckpointError("failed writing checkpoint '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str(), path.string());
}

Checkpoint to_checkpoint(const PolicyBundle& b) {
  Checkpoint c;
  c.metadata = b.metadata;
  std::string rules;
  for (int r : b.cost_rules) rules += (rules.empty() ? "" : ",") + std::to_string(r);
  c.metadata["cost_rules"] = rules.empty() ? "none" : rules;
  c.nets.emplace_back("policy", b.policy);
  c.nets.emplace_back("reward_critic", b.reward_critic);
  for (std::size_t i = 0; i < b.cost_rules.size(); ++i) {
    c.nets.emplace_back("cost_critic_" + std::to_string(b.cost_rules[i]), b.cost_critics[i]);
  }
  return c;
}

PolicyBundle to_bundle(const Checkpoint& c) {
  PolicyBundle b;
  b.metadata = c.metadata;
  b.metadata.erase("cost_rules");
  b.policy = c.net("policy");
  b.reward_critic = c.net("reward_critic");
  auto it = c.metadata.find("cost_rules");
  if (it != c.metadata.end() && it->second != "none") {
    std::istringstream rs(it->second);
    std::string tok;
    while (std::getline(rs, tok, ',')) {
      const int rule = std::stoi(tok);
      b.cost_rules.push_back(rule);
      b.cost_critics.push_back(c.net("cost_critic_" + std::to_string(rule)));
    }
  }
  try {
    b.validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("topology mismatch: ") + e.what());
  }
  return b;
}

void save_checkpoint(const PolicyBundle& bundle, const std::filesystem::path& path) {
  save_checkpoint(to_checkpoint(bundle), path);
}

PolicyBundle load_policy_bundle(const std::filesystem::path& path) {
  return to_bundle(load_checkpoint(path));
}

}  // namespace scenav::nn
