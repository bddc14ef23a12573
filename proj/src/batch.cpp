#include "lindyn/batch.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lindyn {

namespace {

// Runs fn(i) over [0, count) serially or OpenMP-parallel; fn writes only to
// its own slot, so both paths produce identical results. Exceptions are
// captured and rethrown after the loop (OpenMP cannot unwind across the
// parallel region).
template <typename Fn>
void for_each_task(std::size_t count, Exec exec, Fn&& fn) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

BatchOutcome gather(std::vector<std::string>&& slots) {
  BatchOutcome out;
  for (std::string& s : slots) {
    if (!s.empty()) {
      out.pass = false;
      out.failures.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace

BatchOutcome roundtrip_basis_batch(const OperatorSpec& spec, std::uint64_t dim, Exec exec) {
  std::vector<std::string> slots(dim);
  for_each_task(static_cast<std::size_t>(dim), exec, [&](std::size_t k) {
    const FinVec e = FinVec::basis(k);
    if (!(apply_forward(spec, apply_inverse(spec, e)) == e)) {
      slots[k] = "T(T^-1 e_" + std::to_string(k) + ") != e_" + std::to_string(k);
    } else if (!(apply_inverse(spec, apply_forward(spec, e)) == e)) {
      slots[k] = "T^-1(T e_" + std::to_string(k) + ") != e_" + std::to_string(k);
    }
  });
  return gather(std::move(slots));
}

BatchOutcome section_period_batch(const OperatorSpec& spec, const std::vector<FinVec>& vecs,
                                  const std::vector<std::size_t>& blocks, Exec exec) {
  std::vector<std::string> slots(vecs.size());
  for_each_task(vecs.size(), exec, [&](std::size_t i) {
    const CheckResult r = section_period_check(spec, vecs[i], blocks[i]);
    if (!r.pass) slots[i] = "vector " + std::to_string(i) + ": " + r.witness;
  });
  return gather(std::move(slots));
}

BatchOutcome power_oracle_batch(const OperatorSpec& spec, std::size_t section_blocks,
                                const std::vector<FinVec>& vecs,
                                const std::vector<std::int64_t>& powers, Exec exec) {
  const SectionMatrix fwd = SectionMatrix::forward(spec, section_blocks);
  const SectionMatrix inv = SectionMatrix::inverse(spec, section_blocks);
  std::vector<std::string> slots(vecs.size());
  for_each_task(vecs.size(), exec, [&](std::size_t i) {
    const std::int64_t k = powers[i];
    std::vector<Dyadic> dense = SectionMatrix::to_dense(vecs[i], fwd.dim());
    const SectionMatrix& step = k >= 0 ? fwd : inv;
    for (std::int64_t t = 0; t < (k >= 0 ? k : -k); ++t) dense = step.apply(dense);
    const FinVec via_matrix = SectionMatrix::to_sparse(dense);
    const FinVec via_formula = apply_power(spec, vecs[i], k, PowerMode::Reduced);
    if (!(via_matrix == via_formula)) {
      slots[i] = "vector " + std::to_string(i) + " power " + std::to_string(k) +
                 ": matrix and formula paths differ";
    }
  });
  return gather(std::move(slots));
}

BatchOutcome basis_decay_batch(const OperatorSpec& spec,
                               const std::vector<std::size_t>& blocks, Exec exec) {
  std::vector<std::string> slots(blocks.size());
  for_each_task(blocks.size(), exec, [&](std::size_t i) {
    const std::size_t n = blocks[i];
    const std::int64_t window = 2 * spec.block_len(n);
    OrbitWalker w(spec, FinVec::basis(spec.block_start(n)));
    for (std::int64_t k = 0; k < window; ++k) {
      std::int64_t num = -spec.decay_slope_num() * k;
      std::int64_t q = num / spec.decay_slope_den();
      if (num % spec.decay_slope_den() != 0 && num < 0) --q;
      bool ok = compare_norm(w.current(), Dyadic::pow2(q)) <= 0 ||
                le_pow2_rational(w.current().norm_l1(), num, spec.decay_slope_den());
      if (!ok) {
        slots[i] = "block " + std::to_string(n) + ": decay bound fails at step " +
                   std::to_string(k);
        break;
      }
      w.step_forward();
    }
  });
  return gather(std::move(slots));
}

BatchOutcome separation_scan_batch(const SeparatedFamily& family, Exec exec) {
  struct Tagged {
    std::uint64_t value;
    std::size_t set;
  };
  std::vector<Tagged> all;
  for (std::size_t j = 1; j <= family.set_count(); ++j) {
    const auto& s = family.set(j);
    if (!s.members.empty() && s.members.front() < s.request.floor) {
      BatchOutcome out;
      out.pass = false;
      out.failures.push_back("set " + std::to_string(j) + ": min below floor");
      return out;
    }
    for (std::uint64_t m : s.members) all.push_back({m, j});
  }
  std::sort(all.begin(), all.end(),
            [](const Tagged& a, const Tagged& b) { return a.value < b.value; });
  // Exhaustive pairwise scan; each task owns one left endpoint.
  std::vector<std::string> slots(all.size());
  for_each_task(all.size(), exec, [&](std::size_t i) {
    for (std::size_t t = i + 1; t < all.size(); ++t) {
      const std::uint64_t dist = all[t].value - all[i].value;
      const std::uint64_t need = family.set(all[i].set).request.separation +
                                 family.set(all[t].set).request.separation;
      if (dist < need) {
        slots[i] = "members " + std::to_string(all[i].value) + " and " +
                   std::to_string(all[t].value) + " closer than " + std::to_string(need) +
                   (dist == 0 ? " (duplicate)" : "");
        return;
      }
    }
  });
  return gather(std::move(slots));
}

BatchOutcome contraction_batch(const OperatorSpec& spec, const std::vector<FinVec>& vecs,
                               Exec exec) {
  std::vector<std::string> slots(vecs.size());
  for_each_task(vecs.size(), exec, [&](std::size_t i) {
    const CheckResult r = inverse_contraction_check(spec, vecs[i]);
    if (!r.pass) slots[i] = "vector " + std::to_string(i) + ": " + r.witness;
  });
  return gather(std::move(slots));
}

VisitReport visit_check_batch(const OperatorSpec& spec, const FhcPlan& plan, int j,
                              Exec exec) {
  const FhcPlan::PerTarget& t = plan.per.at(static_cast<std::size_t>(j - 1));
  VisitReport rep;
  rep.tolerance = t.tolerance;
  rep.visits.resize(t.hosts.size());
  for_each_task(t.hosts.size(), exec, [&](std::size_t i) {
    rep.visits[i] = visit_check_single(spec, plan, j, t.hosts[i].first);
  });
  rep.all_pass = true;
  for (const auto& v : rep.visits) {
    if (!v.pass) rep.all_pass = false;
  }
  return rep;
}

BatchOutcome decay_spot_check_batch(const OperatorSpec& spec, const FinVec& y,
                                    const DecayCertificate& cert,
                                    const std::vector<std::int64_t>& steps, Exec exec) {
  std::vector<std::string> slots(steps.size());
  for_each_task(steps.size(), exec, [&](std::size_t i) {
    const std::int64_t k = steps[i];
    const FinVec moved = apply_power(spec, y, k, PowerMode::Reduced);
    std::int64_t num = -cert.slope_num * k;
    if (!le_pow2_rational(moved.norm_l1(), num, cert.slope_den)) {
      slots[i] = "certified decay bound fails when recomputed at step " + std::to_string(k);
    }
  });
  return gather(std::move(slots));
}

}  // namespace lindyn
