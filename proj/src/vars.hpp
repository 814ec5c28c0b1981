#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ct {

using VarId = std::uint32_t;

// A pool of named variables. Every polynomial in a given computation refers
// to one pool; VarId is an index into it.
class VarPool {
 public:
  VarId add(const std::string& name) {
    if (index_.count(name)) throw std::runtime_error("duplicate variable: " + name);
    VarId id = static_cast<VarId>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
  }

  std::optional<VarId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(VarId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

  std::vector<VarId> all() const {
    std::vector<VarId> ids(names_.size());
    for (VarId i = 0; i < ids.size(); ++i) ids[i] = i;
    return ids;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, VarId> index_;
};

}  // namespace ct
