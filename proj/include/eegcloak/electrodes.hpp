#pragma once

#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "eegcloak/electrodes_builtin.hpp"
#include "eegcloak/errors.hpp"

namespace eegcloak {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

// 64 named unit-sphere electrode positions. Row order is the canonical
// channel order used by Trial sample matrices.
class ElectrodeTable {
 public:
  static ElectrodeTable from_csv(const std::string& csv) {
    ElectrodeTable t;
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty electrode csv");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string name, xs, ys, zs;
      if (!std::getline(ls, name, ',') || !std::getline(ls, xs, ',') ||
          !std::getline(ls, ys, ',') || !std::getline(ls, zs, ','))
        throw IoError("bad electrode csv line: " + line);
      Vec3 v{std::stod(xs), std::stod(ys), std::stod(zs)};
      const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
      if (std::abs(n - 1.0) > 1e-6) throw NonUnitVector("electrode " + name + " not unit-norm");
      if (t.index_.count(name)) throw IoError("duplicate electrode name " + name);
      t.index_[name] = static_cast<int>(t.names_.size());
      t.names_.push_back(name);
      t.coords_.push_back(v);
    }
    return t;
  }

  static const ElectrodeTable& builtin() {
    static const ElectrodeTable t = from_csv(kBuiltinElectrodeCsv);
    return t;
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const Vec3& coord(int i) const { return coords_[static_cast<std::size_t>(i)]; }

  int index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw UnknownSensor("unknown sensor name: " + name);
    return it->second;
  }
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

 private:
  std::vector<std::string> names_;
  std::vector<Vec3> coords_;
  std::map<std::string, int> index_;
};

}  // namespace eegcloak
