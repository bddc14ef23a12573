#include "lindyn/finvec.hpp"

#include <algorithm>

namespace lindyn {

FinVec FinVec::basis(std::uint64_t k, Dyadic c) {
  FinVec v;
  if (!c.is_zero()) v.entries_.push_back({k, std::move(c)});
  return v;
}

FinVec FinVec::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  FinVec v;
  v.entries_.reserve(entries.size());
  for (Entry& e : entries) {
    if (!v.entries_.empty() && v.entries_.back().index == e.index) {
      v.entries_.back().coeff += e.coeff;
      if (v.entries_.back().coeff.is_zero()) v.entries_.pop_back();
    } else if (!e.coeff.is_zero()) {
      v.entries_.push_back(std::move(e));
    }
  }
  return v;
}

std::uint64_t FinVec::support_max() const {
  if (entries_.empty()) throw arithmetic_fault("support_max of zero vector");
  return entries_.back().index;
}

Dyadic FinVec::coeff(std::uint64_t index) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, std::uint64_t i) { return e.index < i; });
  if (it != entries_.end() && it->index == index) return it->coeff;
  return Dyadic();
}

FinVec& FinVec::scale(const Dyadic& c) {
  if (c.is_zero()) {
    entries_.clear();
    return *this;
  }
  for (Entry& e : entries_) e.coeff *= c;
  return *this;
}

FinVec& FinVec::scale_pow2(std::int64_t e) {
  for (Entry& en : entries_) en.coeff.mul_pow2(e);
  return *this;
}

FinVec& FinVec::negate() {
  for (Entry& e : entries_) e.coeff.negate();
  return *this;
}

FinVec operator+(const FinVec& a, const FinVec& b) {
  FinVec r;
  r.entries_.reserve(a.entries_.size() + b.entries_.size());
  auto ia = a.entries_.begin();
  auto ib = b.entries_.begin();
  while (ia != a.entries_.end() || ib != b.entries_.end()) {
    if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->index < ib->index)) {
      r.entries_.push_back(*ia++);
    } else if (ia == a.entries_.end() || ib->index < ia->index) {
      r.entries_.push_back(*ib++);
    } else {
      Dyadic c = ia->coeff + ib->coeff;
      if (!c.is_zero()) r.entries_.push_back({ia->index, std::move(c)});
      ++ia;
      ++ib;
    }
  }
  return r;
}

FinVec operator-(const FinVec& a, const FinVec& b) {
  FinVec nb = b;
  nb.negate();
  return a + nb;
}

Dyadic FinVec::norm_l1() const {
  Dyadic s;
  for (const Entry& e : entries_) s += e.coeff.abs();
  return s;
}

bool operator==(const FinVec& a, const FinVec& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    if (a.entries_[i].index != b.entries_[i].index) return false;
    if (!(a.entries_[i].coeff == b.entries_[i].coeff)) return false;
  }
  return true;
}

Dyadic dist_l1(const FinVec& a, const FinVec& b) { return (a - b).norm_l1(); }

std::strong_ordering compare_norm(const FinVec& x, const Dyadic& bound) {
  std::vector<Dyadic> terms;
  terms.reserve(x.entries().size());
  for (const auto& e : x.entries()) terms.push_back(e.coeff);
  return compare_abs_sum(terms, bound);
}

std::strong_ordering compare_dist(const FinVec& x, const FinVec& y, const Dyadic& bound) {
  return compare_norm(x - y, bound);
}

}  // namespace lindyn
