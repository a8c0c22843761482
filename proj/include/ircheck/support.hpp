#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace ircheck {

/// Interns strings to dense ids. Lookup of an unknown string returns npos.
class StringInterner {
public:
  static constexpr std::uint32_t npos = 0xffffffff;

  std::uint32_t intern(const std::string& s) {
    auto it = index_.find(s);
    if (it != index_.end())
      return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(names_.size());
    names_.push_back(s);
    index_.emplace(s, id);
    return id;
  }

  std::uint32_t lookup(const std::string& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? npos : it->second;
  }

  const std::string& name(std::uint32_t id) const { return names_[id]; }
  std::size_t size() const { return names_.size(); }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Sorted vector of ids used as a small set. Iteration order is the id order,
/// which keeps every consumer of points-to sets deterministic.
class IdSet {
public:
  bool insert(std::uint32_t v) {
    auto it = std::lower_bound(items_.begin(), items_.end(), v);
    if (it != items_.end() && *it == v)
      return false;
    items_.insert(it, v);
    return true;
  }

  bool contains(std::uint32_t v) const {
    return std::binary_search(items_.begin(), items_.end(), v);
  }

  /// Inserts all of src, appending newly added ids to out_new (if given).
  std::size_t merge(const IdSet& src, std::vector<std::uint32_t>* out_new = nullptr) {
    std::size_t added = 0;
    for (auto v : src.items_) {
      if (insert(v)) {
        ++added;
        if (out_new)
          out_new->push_back(v);
      }
    }
    return added;
  }

  const std::vector<std::uint32_t>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool operator==(const IdSet&) const = default;

private:
  std::vector<std::uint32_t> items_;
};

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

} // namespace ircheck
