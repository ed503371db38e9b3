#include "scenav/env/world.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace scenav {

using geom::Circle;
using geom::Rect;
using geom::Vec2;

double World::diagonal() const { return geom::norm(bounds.max - bounds.min); }

double World::clearance(Vec2 p) const {
  double d = std::min({p.x - bounds.min.x, bounds.max.x - p.x, p.y - bounds.min.y, bounds.max.y - p.y});
  d = std::max(d, 0.0);
  for (const auto& o : obstacles) {
    std::visit([&](const auto& shape) { d = std::min(d, shape.distance_to(p)); }, o);
  }
  return d;
}

void World::validate(double robot_radius, double resolution) const {
  if (!(bounds.max.x > bounds.min.x) || !(bounds.max.y > bounds.min.y)) {
    throw std::invalid_argument("world '" + name + "': empty bounds");
  }
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    bool inside = std::visit(
        [&](const auto& shape) {
          using T = std::decay_t<decltype(shape)>;
          if constexpr (std::is_same_v<T, Rect>) {
            return shape.min.x >= bounds.min.x && shape.min.y >= bounds.min.y &&
                   shape.max.x <= bounds.max.x && shape.max.y <= bounds.max.y &&
                   shape.min.x < shape.max.x && shape.min.y < shape.max.y;
          } else {
            return shape.radius > 0.0 && shape.center.x - shape.radius >= bounds.min.x &&
                   shape.center.x + shape.radius <= bounds.max.x &&
                   shape.center.y - shape.radius >= bounds.min.y &&
                   shape.center.y + shape.radius <= bounds.max.y;
          }
        },
        obstacles[i]);
    if (!inside) {
      throw std::invalid_argument("world '" + name + "': obstacle " + std::to_string(i) +
                                  " is degenerate or leaves the bounds");
    }
  }

  const int nx = static_cast<int>((bounds.max.x - bounds.min.x) / resolution);
  const int ny = static_cast<int>((bounds.max.y - bounds.min.y) / resolution);
  std::vector<char> free(static_cast<std::size_t>(nx) * ny, 0);
  auto at = [&](int i, int j) -> char& { return free[static_cast<std::size_t>(j) * nx + i]; };
  int free_count = 0;
  int seed = -1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Vec2 c{bounds.min.x + (i + 0.5) * resolution, bounds.min.y + (j + 0.5) * resolution};
      if (clearance(c) >= robot_radius) {
        at(i, j) = 1;
        ++free_count;
        if (seed < 0) seed = j * nx + i;
      }
    }
  }
  if (free_count == 0) throw std::invalid_argument("world '" + name + "': no free space");

  std::deque<int> queue{seed};
  at(seed % nx, seed / nx) = 2;
  int reached = 1;
  while (!queue.empty()) {
    const int cell = queue.front();
    queue.pop_front();
    const int i = cell % nx;
    const int j = cell / nx;
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int a = i + di[k];
      const int b = j + dj[k];
      if (a < 0 || b < 0 || a >= nx || b >= ny || at(a, b) != 1) continue;
      at(a, b) = 2;
      ++reached;
      queue.push_back(b * nx + a);
    }
  }
  if (reached != free_count) {
    throw std::invalid_argument("world '" + name + "': free space is not connected");
  }
}

namespace worlds {

World empty() {
  World w;
  w.name = "empty";
  w.bounds = Rect{{0.0, 0.0}, {6.0, 6.0}};
  return w;
}

World four_block() {
  World w;
  w.name = "four-block";
  w.bounds = Rect{{0.0, 0.0}, {6.0, 6.0}};
  for (double cx : {1.75, 4.25}) {
    for (double cy : {1.75, 4.25}) {
      w.obstacles.emplace_back(Rect{{cx - 0.5, cy - 0.5}, {cx + 0.5, cy + 0.5}});
    }
  }
  return w;
}

World corridor() {
  World w;
  w.name = "corridor";
  w.bounds = Rect{{0.0, 0.0}, {8.0, 2.5}};
  w.obstacles.emplace_back(Rect{{2.5, 0.0}, {2.8, 1.4}});
  w.obstacles.emplace_back(Rect{{5.2, 1.1}, {5.5, 2.5}});
  return w;
}

World builtin(const std::string& name) {
  if (name == "empty") return empty();
  if (name == "four-block") return four_block();
  if (name == "corridor") return corridor();
  throw std::invalid_argument("unknown builtin world '" + name + "'");
}

World parse(const std::string& text, const std::string& name) {
  World w;
  w.name = name;
  bool have_bounds = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument(name + ":" + std::to_string(lineno) + ": " + why);
    };
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    if (!ls.eof()) fail("non-numeric value");
    if (kind == "bounds" || kind == "rect") {
      if (v.size() != 4) fail("'" + kind + "' takes 4 numbers");
      Rect r{{v[0], v[1]}, {v[2], v[3]}};
      if (kind == "bounds") {
        w.bounds = r;
        have_bounds = true;
      } else {
        w.obstacles.emplace_back(r);
      }
    } else if (kind == "circle") {
      if (v.size() != 3) fail("'circle' takes 3 numbers");
      w.obstacles.emplace_back(Circle{{v[0], v[1]}, v[2]});
    } else {
      fail("unknown directive '" + kind + "'");
    }
  }
  if (!have_bounds) throw std::invalid_argument(name + ": missing 'bounds' line");
  return w;
}

World load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open world file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::string serialize(const World& w) {
  std::ostringstream out;
  out.precision(17);
  out << "bounds " << w.bounds.min.x << ' ' << w.bounds.min.y << ' ' << w.bounds.max.x << ' '
      << w.bounds.max.y << '\n';
  for (const auto& o : w.obstacles) {
    if (const auto* r = std::get_if<Rect>(&o)) {
      out << "rect " << r->min.x << ' ' << r->min.y << ' ' << r->max.x << ' ' << r->max.y << '\n';
    } else {
      const auto& c = std::get<Circle>(o);
      out << "circle " << c.center.x << ' ' << c.center.y << ' ' << c.radius << '\n';
    }
  }
  return out.str();
}

}  // namespace worlds
}  // namespace scenav
