#include "lindyn/action.hpp"

#include <algorithm>

namespace lindyn {

namespace {

// Emits the image of a single coefficient under one forward application.
void forward_entry(const OperatorSpec& spec, std::uint64_t k, Dyadic c,
                   std::vector<FinVec::Entry>& out) {
  const std::size_t n = spec.block_of(k);
  const std::uint64_t hi = spec.block_end(n);
  if (k + 1 < hi) {
    c.mul_pow2(spec.weight_exp(k + 1));
    out.push_back({k + 1, std::move(c)});
    return;
  }
  // k = block end - 1: recur at the block start, feed the parent for n >= 1.
  if (n >= 1) {
    Dyadic fed = c * spec.coupling(n);
    out.push_back({spec.block_start(spec.parent(n)), std::move(fed)});
  }
  Dyadic rec = std::move(c) * spec.recurrence_inv(n);
  rec.negate();
  out.push_back({spec.block_start(n), std::move(rec)});
}

void inverse_entry(const OperatorSpec& spec, std::uint64_t k, Dyadic c,
                   std::vector<FinVec::Entry>& out) {
  const std::size_t n = spec.block_of(k);
  const std::uint64_t lo = spec.block_start(n);
  if (k > lo) {
    c.mul_pow2(-spec.weight_exp(k));
    out.push_back({k - 1, std::move(c)});
    return;
  }
  // k = block start: own block end plus the chain of parent block ends.
  if (n >= 1) {
    Dyadic prod = c;
    std::size_t a = n;
    const std::int64_t depth = spec.depth_to_root(n);
    for (std::int64_t m = 0; m < depth; ++m) {
      prod *= spec.coupling(a);
      a = spec.parent(a);
      Dyadic ghost = prod;
      ghost.negate();
      out.push_back({spec.block_end(a) - 1, std::move(ghost)});
    }
  }
  c.negate();
  out.push_back({spec.block_end(n) - 1, std::move(c)});
}

FinVec collect(std::vector<FinVec::Entry>&& entries) {
  return FinVec::from_entries(std::move(entries));
}

}  // namespace

FinVec apply_forward(const OperatorSpec& spec, const FinVec& x) {
  std::vector<FinVec::Entry> out;
  out.reserve(2 * x.support_size());
  for (const auto& e : x.entries()) forward_entry(spec, e.index, e.coeff, out);
  return collect(std::move(out));
}

FinVec apply_inverse(const OperatorSpec& spec, const FinVec& x) {
  if (spec.recurrence() != RecurrenceKind::Unit) {
    throw invertibility_error("inverse supported only for unit recurrence");
  }
  std::vector<FinVec::Entry> out;
  out.reserve(2 * x.support_size());
  for (const auto& e : x.entries()) inverse_entry(spec, e.index, e.coeff, out);
  return collect(std::move(out));
}

FinVec apply_power(const OperatorSpec& spec, FinVec x, std::int64_t power, PowerMode mode) {
  if (x.is_zero() || power == 0) return x;
  const bool fwd = power > 0;
  if (!fwd && spec.recurrence() != RecurrenceKind::Unit) {
    throw invertibility_error("negative powers supported only for unit recurrence");
  }
  std::uint64_t steps = fwd ? static_cast<std::uint64_t>(power)
                            : static_cast<std::uint64_t>(-(power + 1)) + 1;
  if (mode == PowerMode::Reduced) {
    const std::size_t n = spec.block_of(x.support_max());
    const std::uint64_t period = 2 * static_cast<std::uint64_t>(spec.block_len(n));
    const std::uint64_t whole = steps / period;
    steps %= period;
    if (whole > 0) {
      // Per period the section scales by 2^(-2*head_len) forward (unit
      // recurrence) or stays fixed (matched recurrence).
      if (spec.recurrence() == RecurrenceKind::Unit) {
        const std::int64_t h = spec.head_len(n);
        if (static_cast<std::uint64_t>(INT64_MAX) / (2 * static_cast<std::uint64_t>(h)) < whole) {
          throw arithmetic_fault("period scalar exponent overflow");
        }
        const std::int64_t total = static_cast<std::int64_t>(whole) * 2 * h;
        x.scale_pow2(fwd ? -total : total);
      }
    }
  }
  OrbitWalker walker(spec, std::move(x));
  for (std::uint64_t i = 0; i < steps; ++i) {
    if (fwd) {
      walker.step_forward();
    } else {
      walker.step_inverse();
    }
  }
  return walker.current();
}

FinVec project_block(const OperatorSpec& spec, const FinVec& x, std::size_t n) {
  const std::uint64_t lo = spec.block_start(n);
  const std::uint64_t hi = spec.block_end(n);
  std::vector<FinVec::Entry> out;
  for (const auto& e : x.entries()) {
    if (e.index >= lo && e.index < hi) out.push_back(e);
  }
  return collect(std::move(out));
}

FinVec project_blocks(const OperatorSpec& spec, const FinVec& x,
                      std::span<const std::size_t> blocks) {
  std::vector<FinVec::Entry> out;
  for (std::size_t n : blocks) {
    const std::uint64_t lo = spec.block_start(n);
    const std::uint64_t hi = spec.block_end(n);
    for (const auto& e : x.entries()) {
      if (e.index >= lo && e.index < hi) out.push_back(e);
    }
  }
  return collect(std::move(out));
}

OrbitWalker::OrbitWalker(const OperatorSpec& spec, FinVec start)
    : spec_(spec), cur_(std::move(start)) {
  if (!cur_.is_zero()) spec_.block_of(cur_.support_max());  // horizon check up front
}

void OrbitWalker::step_forward() {
  std::vector<FinVec::Entry> in = cur_.release();
  scratch_.clear();
  scratch_.reserve(2 * in.size());
  for (auto& e : in) forward_entry(spec_, e.index, std::move(e.coeff), scratch_);
  cur_ = FinVec::from_entries(std::move(scratch_));
  scratch_ = {};
}

void OrbitWalker::step_inverse() {
  if (spec_.recurrence() != RecurrenceKind::Unit) {
    throw invertibility_error("inverse supported only for unit recurrence");
  }
  std::vector<FinVec::Entry> in = cur_.release();
  scratch_.clear();
  scratch_.reserve(2 * in.size());
  for (auto& e : in) inverse_entry(spec_, e.index, std::move(e.coeff), scratch_);
  cur_ = FinVec::from_entries(std::move(scratch_));
  scratch_ = {};
}

SectionMatrix SectionMatrix::forward(const OperatorSpec& spec, std::size_t n_blocks) {
  const std::uint64_t dim = spec.block_start(n_blocks);
  if (dim > kMaxSectionDim) {
    throw budget_error("section of " + std::to_string(dim) + " coordinates exceeds dense budget");
  }
  SectionMatrix m;
  m.dim_ = static_cast<std::size_t>(dim);
  m.m_.assign(m.dim_ * m.dim_, Dyadic());
  for (std::size_t k = 0; k < m.dim_; ++k) {
    const FinVec col = apply_forward(spec, FinVec::basis(k));
    for (const auto& e : col.entries()) m.m_[static_cast<std::size_t>(e.index) * m.dim_ + k] = e.coeff;
  }
  return m;
}

SectionMatrix SectionMatrix::inverse(const OperatorSpec& spec, std::size_t n_blocks) {
  const std::uint64_t dim = spec.block_start(n_blocks);
  if (dim > kMaxSectionDim) {
    throw budget_error("section of " + std::to_string(dim) + " coordinates exceeds dense budget");
  }
  SectionMatrix m;
  m.dim_ = static_cast<std::size_t>(dim);
  m.m_.assign(m.dim_ * m.dim_, Dyadic());
  for (std::size_t k = 0; k < m.dim_; ++k) {
    const FinVec col = apply_inverse(spec, FinVec::basis(k));
    for (const auto& e : col.entries()) m.m_[static_cast<std::size_t>(e.index) * m.dim_ + k] = e.coeff;
  }
  return m;
}

std::vector<Dyadic> SectionMatrix::apply(std::span<const Dyadic> v) const {
  std::vector<Dyadic> out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    Dyadic acc;
    for (std::size_t c = 0; c < dim_; ++c) {
      const Dyadic& a = m_[r * dim_ + c];
      if (!a.is_zero() && !v[c].is_zero()) acc += a * v[c];
    }
    out[r] = std::move(acc);
  }
  return out;
}

SectionMatrix SectionMatrix::multiply(const SectionMatrix& o) const {
  SectionMatrix r;
  r.dim_ = dim_;
  r.m_.assign(dim_ * dim_, Dyadic());
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const Dyadic& a = m_[i * dim_ + k];
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        const Dyadic& b = o.m_[k * dim_ + j];
        if (!b.is_zero()) r.m_[i * dim_ + j] += a * b;
      }
    }
  }
  return r;
}

bool SectionMatrix::is_identity() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const Dyadic& v = m_[i * dim_ + j];
      if (i == j ? !(v == Dyadic(1)) : !v.is_zero()) return false;
    }
  }
  return true;
}

std::vector<Dyadic> SectionMatrix::to_dense(const FinVec& x, std::size_t dim) {
  std::vector<Dyadic> v(dim);
  for (const auto& e : x.entries()) {
    if (e.index >= dim) throw horizon_error("vector leaves the section");
    v[static_cast<std::size_t>(e.index)] = e.coeff;
  }
  return v;
}

FinVec SectionMatrix::to_sparse(std::span<const Dyadic> v) {
  std::vector<FinVec::Entry> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_zero()) out.push_back({i, v[i]});
  }
  return FinVec::from_entries(std::move(out));
}

}  // namespace lindyn
