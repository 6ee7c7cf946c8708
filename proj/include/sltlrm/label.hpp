#pragma once

#include <algorithm>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sltlrm {

// A label is the set of propositions true at one step. Kept as a sorted
// unique vector so equality and ordering are structural.
class Label {
public:
  Label() = default;
  Label(std::initializer_list<std::string> props) : props_(props) { canonicalize(); }
  explicit Label(std::vector<std::string> props) : props_(std::move(props)) { canonicalize(); }

  bool contains(const std::string& p) const {
    return std::binary_search(props_.begin(), props_.end(), p);
  }
  bool empty() const { return props_.empty(); }
  const std::vector<std::string>& props() const { return props_; }

  // "{}" or "{c}" or "{a,b}"
  std::string str() const {
    std::string out = "{";
    for (size_t i = 0; i < props_.size(); ++i) {
      if (i) out += ',';
      out += props_[i];
    }
    out += '}';
    return out;
  }

  auto operator<=>(const Label&) const = default;

private:
  void canonicalize() {
    std::sort(props_.begin(), props_.end());
    props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
  }
  std::vector<std::string> props_;
};

// The set of labels an environment can emit, in a fixed order so labels
// can be referred to by index.
class Alphabet {
public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Label> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    if (labels_.empty()) throw std::invalid_argument("alphabet must be non-empty");
  }

  // {} plus one singleton per proposition name.
  static Alphabet singletons(const std::vector<std::string>& props) {
    std::vector<Label> ls{Label{}};
    for (const auto& p : props) ls.push_back(Label{p});
    return Alphabet(std::move(ls));
  }

  size_t size() const { return labels_.size(); }
  const Label& at(size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const { return labels_; }

  // Index of l, or -1 when not present.
  int index_of(const Label& l) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
    if (it == labels_.end() || *it != l) return -1;
    return static_cast<int>(it - labels_.begin());
  }

  bool operator==(const Alphabet&) const = default;

private:
  std::vector<Label> labels_;
};

// A finite trace of labels; view type used by evaluation.
using Trace = std::vector<Label>;
using TraceView = std::span<const Label>;

}  // namespace sltlrm
