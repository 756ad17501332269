#pragma once

#include <utility>
#include <vector>

namespace mmsr {

// Short memory of recently rejected (vehicle, position) reinsertion
// candidates. Sampling avoids listed pairs while alternatives exist.
class TabuList {
 public:
  explicit TabuList(int tenure) : tenure_(tenure) {}

  bool allows(int vehicle, int position) const {
    for (const auto& [v, p] : ring_)
      if (v == vehicle && p == position) return false;
    return true;
  }

  void reject(int vehicle, int position) {
    if (tenure_ <= 0) return;
    if (static_cast<int>(ring_.size()) < tenure_) {
      ring_.emplace_back(vehicle, position);
    } else {
      ring_[head_] = {vehicle, position};
      head_ = (head_ + 1) % ring_.size();
    }
  }

  void clear() {
    ring_.clear();
    head_ = 0;
  }

  int tenure() const { return tenure_; }

 private:
  int tenure_;
  std::vector<std::pair<int, int>> ring_;
  std::size_t head_ = 0;
};

}  // namespace mmsr
