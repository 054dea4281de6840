#pragma once

#include <functional>
#include <string>
#include <vector>

#include "posim/order.hpp"

namespace posim {

inline constexpr long long kDefaultExtensionCap = 1'000'000;

namespace detail {

struct ExtensionWalker {
  const PartialOrder& order;
  std::vector<DynBitset> up;  // predecessor masks (transpose of the closure)
  DynBitset placed;
  std::vector<int> seq;
  long long cap;
  long long count = 0;
  const std::function<void(const std::vector<int>&)>& emit;

  ExtensionWalker(const PartialOrder& o, long long cap_,
                  const std::function<void(const std::vector<int>&)>& emit_)
      : order(o), placed(o.n), cap(cap_), emit(emit_) {
    up.assign(order.n, DynBitset(order.n));
    for (int x = 0; x < order.n; ++x)
      order.closure.sets[x].for_each([&](int y) { up[y].set(x); });
    seq.reserve(order.n);
  }

  // x can be placed next iff every predecessor is already placed.
  bool ready(int x) const { return up[x].subset_of(placed); }

  void walk() {
    if (static_cast<int>(seq.size()) == order.n) {
      if (++count > cap)
        raise(ErrorKind::ExtensionCapExceeded,
              "more than " + std::to_string(cap) + " linear extensions");
      if (emit) emit(seq);
      return;
    }
    for (int x = 0; x < order.n; ++x) {
      if (placed.test(x) || !ready(x)) continue;
      placed.set(x);
      seq.push_back(x);
      walk();
      seq.pop_back();
      placed.reset(x);
    }
  }
};

}  // namespace detail

// Streams every linear extension (as the candidate sequence from top to
// bottom) in lexicographic candidate order; returns the count. Throws
// ExtensionCapExceeded as soon as the count passes `cap`.
inline long long for_each_linear_extension(
    const PartialOrder& order, long long cap,
    const std::function<void(const std::vector<int>&)>& emit) {
  detail::ExtensionWalker walker(order, cap, emit);
  walker.walk();
  return walker.count;
}

inline long long count_linear_extensions(const PartialOrder& order,
                                         long long cap = kDefaultExtensionCap) {
  return for_each_linear_extension(order, cap, nullptr);
}

inline std::vector<TotalOrderRanking> linear_extensions(
    const PartialOrder& order, long long cap = kDefaultExtensionCap) {
  std::vector<TotalOrderRanking> out;
  for_each_linear_extension(order, cap, [&](const std::vector<int>& seq) {
    TotalOrderRanking rk;
    rk.position.resize(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) rk.position[seq[i]] = static_cast<int>(i) + 1;
    out.push_back(std::move(rk));
  });
  return out;
}

}  // namespace posim
