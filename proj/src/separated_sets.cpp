#include "lindyn/separated_sets.hpp"

#include <algorithm>

namespace lindyn {

DensityCurve prefix_density(const std::vector<std::uint64_t>& sorted_members,
                            std::uint64_t horizon) {
  DensityCurve curve;
  curve.horizon = horizon;
  curve.counts.resize(horizon, 0);
  std::uint64_t count = 0;
  std::size_t idx = 0;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    while (idx < sorted_members.size() && sorted_members[idx] < n) {
      ++count;
      ++idx;
    }
    curve.counts[n - 1] = count;
  }
  return curve;
}

namespace {

std::uint64_t round_up_pow2(std::uint64_t v) {
  std::uint64_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// Owner of ladder interval i >= 1: the set index j with i = 2^(j-1) mod 2^j,
// i.e. 1 + (index of the lowest set bit).
std::size_t interval_owner(std::uint64_t i) {
  std::size_t j = 1;
  while ((i & 1) == 0) {
    i >>= 1;
    ++j;
  }
  return j;
}

}  // namespace

SeparatedFamily SeparatedFamily::build(const std::vector<Pair>& pairs, std::uint64_t horizon) {
  SeparatedFamily fam;
  fam.horizon_ = horizon;
  if (pairs.empty()) return fam;

  const std::size_t count = pairs.size();
  fam.sets_.resize(count);
  std::uint64_t prev_governing = 0;
  for (std::size_t j = 0; j < count; ++j) {
    SetInfo& s = fam.sets_[j];
    s.request = pairs[j];
    if (s.request.separation < 1 || s.request.floor < 1) {
      throw validation_error("separation and floor must be positive");
    }
    s.governing = std::max({s.request.separation, s.request.floor, prev_governing + 1});
    prev_governing = s.governing;
    s.stride = round_up_pow2(2 * s.governing);
  }

  // Ladder walk: guard gap before interval i is twice the governing
  // parameter of the largest eligible set, so any cross-interval distance
  // dominates both separation radii involved.
  auto guard = [&](std::uint64_t i) {
    const std::size_t idx = static_cast<std::size_t>(std::min<std::uint64_t>(i, count));
    return 2 * fam.sets_[idx - 1].governing;
  };
  std::uint64_t c = guard(1);
  for (std::uint64_t i = 1; c < horizon; ++i) {
    const std::size_t owner = interval_owner(i);
    if (owner <= count) {
      SetInfo& s = fam.sets_[owner - 1];
      for (std::uint64_t m = c; m < 2 * c && m < horizon; m += s.stride) {
        s.members.push_back(m);
      }
    }
    const std::uint64_t next = 2 * c + guard(i + 1);
    if (next <= c) break;  // overflow guard
    c = next;
  }

  for (std::size_t j = 0; j < count; ++j) {
    SetInfo& s = fam.sets_[j];
    if (s.members.empty()) {
      throw validation_error("horizon " + std::to_string(horizon) +
                             " too small to place set " + std::to_string(j + 1) +
                             " above its floor");
    }
    // Certified bound from ladder troughs: prefix density is piecewise
    // increasing between member arrivals, so its minima over [burn_in, H]
    // occur just before each member after the first gap, and at H itself.
    // burn_in = first member after the first inter-interval gap.
    std::uint64_t burn = 0;
    for (std::size_t t = 1; t < s.members.size(); ++t) {
      if (s.members[t] - s.members[t - 1] > s.stride) {
        burn = s.members[t];
        break;
      }
    }
    if (burn == 0) burn = s.members.front() + 1;
    s.burn_in = burn;
    std::uint64_t bn = 1, bd = 1;  // density 1/1 sentinel, tightened below
    auto consider = [&](std::uint64_t cnt, std::uint64_t pos) {
      if (pos == 0) return;
      // cnt/pos < bn/bd ?
      if (static_cast<unsigned __int128>(cnt) * bd <
          static_cast<unsigned __int128>(bn) * pos) {
        bn = cnt;
        bd = pos;
      }
    };
    // Count is constant between arrivals and density decreases along each
    // stretch, so the minima sit at N = each member value (just before it
    // joins the prefix) and at N = horizon.
    for (std::size_t t = 0; t < s.members.size(); ++t) {
      if (s.members[t] >= burn) consider(static_cast<std::uint64_t>(t), s.members[t]);
    }
    consider(static_cast<std::uint64_t>(s.members.size()), horizon);
    s.bound_num = bn;
    s.bound_den = bd;
  }
  return fam;
}

const SeparatedFamily::SetInfo& SeparatedFamily::set(std::size_t j) const {
  if (j < 1 || j > sets_.size()) {
    throw validation_error("unknown set index " + std::to_string(j));
  }
  return sets_[j - 1];
}

std::vector<std::uint64_t> SeparatedFamily::members(std::size_t j, std::uint64_t limit) const {
  const SetInfo& s = set(j);
  std::vector<std::uint64_t> out;
  for (std::uint64_t m : s.members) {
    if (m >= limit) break;
    out.push_back(m);
  }
  return out;
}

}  // namespace lindyn
