// Batch front-end: schedules, verification suites, staged-vector builds and
// inverse profiling, with machine-readable JSON/CSV reports.
//
// Exit codes: 0 all requested checks pass; 1 check failure; 2 configuration
// error; 3 horizon or budget exceeded.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lindyn/batch.hpp"
#include "lindyn/io_json.hpp"

namespace {

using namespace lindyn;
using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "0.1.0";

struct CliError {
  int code;
  std::string message;
};

struct ReportBuilder {
  json doc;
  bool all_pass = true;
  bool timings = false;
  Clock::time_point started = Clock::now();

  ReportBuilder(std::string command, json config) {
    doc["command"] = std::move(command);
    doc["config"] = std::move(config);
    doc["version"] = kVersion;
    doc["checks"] = json::array();
  }

  void add(const std::string& name, bool pass, json witness = {}) {
    json c;
    c["name"] = name;
    c["status"] = pass ? "pass" : "fail";
    if (!witness.is_null() && !(witness.is_object() && witness.empty())) {
      c["witness"] = std::move(witness);
    }
    doc["checks"].push_back(std::move(c));
    all_pass = all_pass && pass;
  }

  void add_outcome(const std::string& name, const BatchOutcome& out) {
    json witness;
    if (!out.pass) witness["failures"] = out.failures;
    add(name, out.pass, std::move(witness));
  }

  int finish(const std::string& out_path) {
    const double secs =
        std::chrono::duration<double>(Clock::now() - started).count();
    std::cerr << doc["command"].get<std::string>() << ": "
              << (all_pass ? "pass" : "FAIL") << " (" << secs << " s)\n";
    if (timings) doc["timings"] = json{{"seconds", secs}};
    if (!out_path.empty()) {
      write_json_atomic(out_path, doc);
    } else {
      std::cout << doc.dump(2) << "\n";
    }
    return all_pass ? 0 : 1;
  }
};

// Deterministic sampling without std distributions.
struct Sampler {
  std::mt19937_64 eng;
  explicit Sampler(std::uint64_t seed) : eng(seed) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng() % n; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  Dyadic dyadic() {
    return Dyadic::scaled(range(-(1 << 20), 1 << 20), range(-12, 12));
  }
  FinVec finvec(std::uint64_t limit, std::size_t support) {
    std::vector<FinVec::Entry> e;
    for (std::size_t i = 0; i < support; ++i) e.push_back({below(limit), dyadic()});
    return FinVec::from_entries(std::move(e));
  }
};

void write_density_csv(const std::string& path, const DensityCurve& curve) {
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path);
  out << "N,count,density\n";
  for (std::uint64_t n = 1; n <= curve.horizon; ++n) {
    out << n << "," << curve.counts[n - 1] << "," << curve.counts[n - 1] << "/" << n
        << "\n";
  }
}

void write_norm_csv(const std::string& path, const std::vector<Dyadic>& norms) {
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path);
  out << "j,norm_mantissa,norm_exponent\n";
  for (std::size_t j = 0; j < norms.size(); ++j) {
    out << j << "," << norms[j].mantissa().get_str() << "," << norms[j].exponent()
        << "\n";
  }
}

json gain_certificate_json(const GainCertificate& c) {
  return json{{"block", c.block},
              {"required_exp", c.required_exp},
              {"onset", c.onset},
              {"window", c.window},
              {"period_growth_exp", c.period_growth_exp}};
}

// ---- verify all -----------------------------------------------------------

int run_verify(const std::string& spec_name, const std::string& level,
               std::uint64_t seed, std::int64_t samples_override,
               const std::string& out_path, bool timings) {
  const bool full = level == "full";
  const OperatorSpec spec = load_spec(spec_name);
  ReportBuilder rep("verify all",
                    json{{"spec", spec_name},
                         {"level", level},
                         {"seed", seed},
                         {"samples", samples_override}});
  rep.timings = timings;
  Sampler rng(seed);
  const Exec exec = Exec::Parallel;

  {
    json w;
    bool ok = true;
    try {
      spec.schedule().validate();
    } catch (const validation_error& e) {
      ok = false;
      w["violation"] = e.what();
    }
    rep.add("schedule-constraints", ok, std::move(w));
  }
  {
    bool ok = true;
    json w;
    for (std::size_t n = 0; n < spec.num_blocks(); ++n) {
      if (!(spec.interior_product(n) == Dyadic::pow2(-spec.head_len(n)))) {
        ok = false;
        w["block"] = n;
        break;
      }
    }
    rep.add("interior-product-law", ok, std::move(w));
  }
  {
    bool ok = true;
    json w;
    const std::size_t blocks = full ? spec.num_blocks() : std::min<std::size_t>(3, spec.num_blocks());
    for (std::size_t n = 0; n < blocks && ok; ++n) {
      std::vector<std::uint64_t> coords = {spec.block_start(n), spec.block_end(n) - 1};
      coords.push_back(spec.block_start(n) +
                       rng.below(static_cast<std::uint64_t>(spec.block_len(n))));
      const CheckResult r = eigen_period_check(spec, n, coords);
      if (!r.pass) {
        ok = false;
        w["witness"] = r.witness;
      }
    }
    rep.add("block-eigen-periodicity", ok, std::move(w));
  }
  {
    const int per_gen = samples_override > 0 ? static_cast<int>(samples_override)
                                             : (full ? 50 : 5);
    const int gens = full ? std::min(2, spec.max_generation()) : std::min(1, spec.max_generation());
    std::vector<FinVec> vecs;
    std::vector<std::size_t> blocks;
    for (int k = 0; k <= gens; ++k) {
      const std::size_t last = static_cast<std::size_t>(generation_start(k + 1)) - 1;
      for (int i = 0; i < per_gen; ++i) {
        blocks.push_back(last);
        vecs.push_back(rng.finvec(spec.block_end(last), 8));
      }
    }
    rep.add_outcome("section-periodicity", section_period_batch(spec, vecs, blocks, exec));
  }
  {
    const InvertibilityReport inv = invertibility_check(spec, full ? 64 : 8);
    json w;
    if (!inv.pass) w["detail"] = inv.detail;
    rep.add("invertibility-bounds", inv.pass, std::move(w));
  }
  rep.add_outcome("inverse-roundtrip",
                  roundtrip_basis_batch(
                      spec, full ? spec.horizon_coord() : spec.block_start(2), exec));
  {
    const std::size_t section = std::min<std::size_t>(2, spec.num_blocks());
    const int count = samples_override > 0 ? static_cast<int>(samples_override)
                                           : (full ? 100 : 10);
    const std::int64_t pmax = full ? 2 * spec.block_len(section - 1) : 16;
    std::vector<FinVec> vecs;
    std::vector<std::int64_t> powers;
    for (int i = 0; i < count; ++i) {
      vecs.push_back(rng.finvec(spec.block_start(section), 8));
      powers.push_back(i % 2 == 0 ? (i % 4 == 0 ? pmax : -pmax) : rng.range(-pmax, pmax));
    }
    rep.add_outcome("matrix-oracle-equivalence",
                    power_oracle_batch(spec, section, vecs, powers, exec));
  }
  {
    bool ok = true;
    json w;
    try {
      const DecayCertificate c0 = decay_certificate(spec, FinVec::basis(0));
      const DecayCertificate c1 =
          decay_certificate(spec, FinVec::basis(spec.block_start(1)));
      w["k0_e0"] = c0.k0;
      w["k0_b1"] = c1.k0;
      const int spots = full ? 200 : 20;
      std::vector<std::int64_t> steps;
      for (int i = 0; i < spots; ++i) steps.push_back(c0.k0 + rng.range(0, 512));
      ok = decay_spot_check_batch(spec, FinVec::basis(0), c0, steps, exec).pass;
    } catch (const budget_error& e) {
      ok = false;
      w["budget"] = e.what();
    }
    rep.add("orbit-decay-certificate", ok, std::move(w));
  }
  {
    const int count = samples_override > 0 ? static_cast<int>(samples_override)
                                           : (full ? 500 : 50);
    std::vector<FinVec> vecs;
    for (int i = 0; i < count; ++i) vecs.push_back(rng.finvec(spec.horizon_coord(), 8));
    rep.add_outcome("inverse-contraction", contraction_batch(spec, vecs, exec));
  }
  {
    bool ok = true;
    json w;
    const std::int64_t jmax = full ? 2 * spec.block_len(1) : spec.block_len(1);
    for (std::int64_t j = 0; j <= jmax && ok; j += full ? 1 : 7) {
      const CheckResult r =
          cross_block_check(spec, 0, 1, 1, j, FinVec::basis(spec.block_start(1)));
      if (!r.pass) {
        ok = false;
        w["j"] = j;
      }
    }
    rep.add("cross-block-leakage", ok, std::move(w));
  }
  {
    bool ok = true;
    json w;
    const std::size_t lmax = full ? std::min<std::size_t>(2, spec.num_blocks() - 1) : 1;
    for (std::size_t l = 0; l <= lmax && ok; ++l) {
      const GainProfile gp = gain_profile(spec, l, (full ? 4 : 2) * spec.block_len(l));
      if (!gp.floor_ok) {
        ok = false;
        w["block"] = l;
        continue;
      }
      for (std::size_t j = 0; j + static_cast<std::size_t>(gp.period) < gp.min_exp.size();
           ++j) {
        if (gp.min_exp[j + static_cast<std::size_t>(gp.period)] !=
            gp.min_exp[j] + gp.period_growth_exp) {
          ok = false;
          w["block"] = l;
          w["j"] = j;
          break;
        }
      }
    }
    rep.add("gain-floor-and-period", ok, std::move(w));
  }
  return rep.finish(out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computation toolkit for block-cyclic weighted shifts with feedback"};
  app.require_subcommand(1);

  std::string spec_name;
  std::string vec_path;
  std::string out_path;
  std::string csv_path;
  std::string target_path;
  std::string pairs_path;
  std::string level = "quick";
  std::uint64_t seed = 0xC0FFEE;
  std::int64_t samples = -1;
  std::int64_t power = 1;
  std::int64_t basis = -1;
  std::int64_t synth_limit = -1;
  std::uint64_t horizon = 0;
  int targets = 1;
  bool timings = false;
  bool serial = false;

  auto* schedule = app.add_subcommand("schedule", "schedule utilities");
  auto* schedule_validate = schedule->add_subcommand("validate", "validate a schedule");
  schedule_validate->add_option("--spec", spec_name, "schedule file or builtin name")
      ->required();

  auto* op = app.add_subcommand("op", "operator application");
  auto* op_apply = op->add_subcommand("apply", "apply a signed operator power");
  op_apply->add_option("--spec", spec_name)->required();
  op_apply->add_option("--vec", vec_path, "input vector JSON file");
  op_apply->add_option("--basis", basis, "use a basis vector instead of a file");
  op_apply->add_option("--power", power, "signed power");
  op_apply->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "verification suites");
  auto* verify_all = verify->add_subcommand("all", "run the certificate battery");
  verify_all->add_option("--spec", spec_name)->required();
  verify_all->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}));
  verify_all->add_option("--seed", seed);
  verify_all->add_option("--samples", samples, "override per-check sample counts");
  verify_all->add_option("--out", out_path);
  verify_all->add_flag("--timings", timings, "include timings in the report");

  auto* sets = app.add_subcommand("sets", "separated set families");
  auto* sets_gen = sets->add_subcommand("gen", "build a family and verify it");
  sets_gen->add_option("--pairs", pairs_path, "JSON array of {separation, floor}")
      ->required();
  sets_gen->add_option("--horizon", horizon)->required();
  sets_gen->add_option("--out", out_path);

  auto* fhc = app.add_subcommand("fhc", "staged-vector construction");
  auto* fhc_build = fhc->add_subcommand("build", "choose a plan and assemble the vector");
  auto* fhc_check = fhc->add_subcommand("check", "verify the visit distances");
  auto* fhc_density = fhc->add_subcommand("density", "orbit density profile CSV");
  for (auto* cmd : {fhc_build, fhc_check, fhc_density}) {
    cmd->add_option("--spec", spec_name)->required();
    cmd->add_option("--J", targets, "number of targets");
    cmd->add_option("--horizon", horizon)->required();
    cmd->add_option("--target", target_path, "override the last target (vector JSON)");
    cmd->add_option("--out", out_path);
    cmd->add_flag("--serial", serial, "force the serial reference path");
  }

  auto* tau = app.add_subcommand("tau", "coupling schedule synthesis");
  auto* tau_synth = tau->add_subcommand("synth", "synthesize the starving schedule");
  tau_synth->add_option("--spec", spec_name)->required();
  tau_synth->add_option("-L,--limit", synth_limit, "synthesis horizon");
  tau_synth->add_option("--out", out_path);

  auto* inv = app.add_subcommand("inv", "inverse-orbit analysis");
  auto* inv_profile = inv->add_subcommand("profile", "return-scarcity profile");
  inv_profile->add_option("--spec", spec_name)->required();
  inv_profile->add_option("--vec", vec_path)->required();
  inv_profile->add_option("--horizon", horizon)->required();
  inv_profile->add_option("--out", out_path);
  inv_profile->add_option("--csv", csv_path, "exact norm curve CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (schedule_validate->parsed()) {
      const OperatorSpec spec = load_spec(spec_name);
      ReportBuilder rep("schedule validate", json{{"spec", spec_name}});
      rep.add("schedule-constraints", true);
      rep.add("coupling-count", true, json{{"values", spec.tau_count()}});
      return rep.finish(out_path);
    }
    if (op_apply->parsed()) {
      const OperatorSpec spec = load_spec(spec_name);
      FinVec x;
      if (basis >= 0) {
        x = FinVec::basis(static_cast<std::uint64_t>(basis));
      } else if (!vec_path.empty()) {
        x = load_finvec(vec_path);
      } else {
        throw CliError{2, "op apply needs --vec or --basis"};
      }
      const FinVec y = apply_power(spec, x, power);
      const json out = finvec_to_json(y);
      if (out_path.empty()) {
        std::cout << out.dump(2) << "\n";
      } else {
        write_json_atomic(out_path, out);
      }
      return 0;
    }
    if (verify_all->parsed()) {
      return run_verify(spec_name, level, seed, samples, out_path, timings);
    }
    if (sets_gen->parsed()) {
      std::ifstream in(pairs_path);
      if (!in) throw CliError{2, "cannot open " + pairs_path};
      json jp;
      in >> jp;
      std::vector<SeparatedFamily::Pair> pairs;
      for (const auto& item : jp) {
        pairs.push_back({item.at("separation").get<std::uint64_t>(),
                         item.at("floor").get<std::uint64_t>()});
      }
      const SeparatedFamily fam = SeparatedFamily::build(pairs, horizon);
      ReportBuilder rep("sets gen", json{{"pairs", jp}, {"horizon", horizon}});
      rep.add_outcome("pairwise-separation", separation_scan_batch(fam, Exec::Parallel));
      json sets_json = json::array();
      for (std::size_t j = 1; j <= fam.set_count(); ++j) {
        const auto& s = fam.set(j);
        bool measured_ok = true;
        const DensityCurve curve = prefix_density(s.members, horizon);
        for (std::uint64_t n = s.burn_in; n <= horizon; ++n) {
          if (static_cast<unsigned __int128>(curve.counts[n - 1]) * s.bound_den <
              static_cast<unsigned __int128>(s.bound_num) * n) {
            measured_ok = false;
            break;
          }
        }
        rep.add("density-bound-set-" + std::to_string(j), measured_ok,
                json{{"bound", std::to_string(s.bound_num) + "/" + std::to_string(s.bound_den)},
                     {"burn_in", s.burn_in}});
        sets_json.push_back(json{{"index", j},
                                 {"separation", s.request.separation},
                                 {"floor", s.request.floor},
                                 {"governing", s.governing},
                                 {"stride", s.stride},
                                 {"members", s.members},
                                 {"bound_num", s.bound_num},
                                 {"bound_den", s.bound_den},
                                 {"burn_in", s.burn_in}});
      }
      rep.doc["sets"] = std::move(sets_json);
      return rep.finish(out_path);
    }
    if (fhc_build->parsed() || fhc_check->parsed() || fhc_density->parsed()) {
      const OperatorSpec spec = load_spec(spec_name);
      DenseCorpus corpus = corpus_generate(spec, targets);
      if (!target_path.empty()) {
        corpus.targets[static_cast<std::size_t>(targets - 1)] = load_finvec(target_path);
      }
      const FhcPlan plan = choose_plan(spec, corpus, targets, horizon);
      const Assembled a = assemble(spec, plan);
      json config{{"spec", spec_name}, {"J", targets}, {"horizon", horizon},
                  {"target_override", target_path}};
      if (fhc_build->parsed()) {
        ReportBuilder rep("fhc build", config);
        rep.add("per-term-norm-bound", a.per_term_bound_ok);
        json plan_json = json::array();
        for (const auto& t : plan.per) {
          json hosts = json::array();
          for (const auto& [m, k] : t.hosts) hosts.push_back(json{{"m", m}, {"k", k}});
          plan_json.push_back(json{{"lead", t.lead},
                                   {"separation", t.separation},
                                   {"floor", t.floor},
                                   {"decay_start", t.decay_start},
                                   {"tolerance", dyadic_to_json(t.tolerance)},
                                   {"hosts", hosts}});
        }
        rep.doc["plan"] = std::move(plan_json);
        rep.doc["vector"] = finvec_to_json(a.x);
        rep.doc["included_norm"] = dyadic_to_json(a.included_norm);
        rep.doc["tail_bound"] = dyadic_to_json(a.tail_bound);
        return rep.finish(out_path);
      }
      if (fhc_check->parsed()) {
        ReportBuilder rep("fhc check", config);
        const VisitReport vr =
            visit_check_batch(spec, plan, targets, serial ? Exec::Serial : Exec::Parallel);
        json visits = json::array();
        for (const auto& v : vr.visits) {
          visits.push_back(json{{"m", v.step},
                                {"distance", dyadic_to_json(v.distance)},
                                {"case_same", dyadic_to_json(v.case_same)},
                                {"case_later", dyadic_to_json(v.case_later)},
                                {"case_earlier", dyadic_to_json(v.case_earlier)},
                                {"coordinate_recovery", v.coordinate_recovery},
                                {"pass", v.pass}});
          rep.add("visit-" + std::to_string(v.step),
                  v.pass && v.coordinate_recovery);
        }
        rep.doc["tolerance"] = dyadic_to_json(vr.tolerance);
        rep.doc["visits"] = std::move(visits);
        return rep.finish(out_path);
      }
      // fhc density
      const auto& t = plan.per[static_cast<std::size_t>(targets - 1)];
      const DensityProfile prof =
          density_profile(spec, a.x, t.target, t.tolerance, horizon);
      if (out_path.empty()) throw CliError{2, "fhc density needs --out CSV path"};
      write_density_csv(out_path, prof.curve);
      std::cerr << "fhc density: " << prof.visits.size() << " visits below " << horizon
                << "\n";
      return 0;
    }
    if (tau_synth->parsed()) {
      const OperatorSpec spec = load_spec(spec_name);
      const std::int64_t limit = synth_limit >= 0 ? synth_limit : default_tau_limit(spec);
      const TauSchedule ts = synthesize_tau(spec, limit);
      ReportBuilder rep("tau synth", json{{"spec", spec_name}, {"limit", limit}});
      json values = json::array();
      for (std::size_t i = 0; i < ts.values.size(); ++i) {
        values.push_back(json{{"l", i}, {"tau", ts.values[i]}, {"binding", ts.binding[i]}});
      }
      rep.doc["schedule"] = std::move(values);
      json certs = json::array();
      for (std::int64_t l = 0; l <= ts.exact_limit; ++l) {
        certs.push_back(gain_certificate_json(
            certify_gain_onset(spec, static_cast<std::size_t>(l))));
      }
      rep.doc["gain_certificates"] = std::move(certs);
      rep.add("substitution-check", true);
      return rep.finish(out_path);
    }
    if (inv_profile->parsed()) {
      const OperatorSpec spec = load_spec(spec_name);
      const FinVec x = load_finvec(vec_path);
      const ScarcityTrace trace = scarcity_profile(spec, x, horizon, !csv_path.empty());
      ReportBuilder rep("inv profile",
                        json{{"spec", spec_name}, {"vec", vec_path}, {"horizon", horizon}});
      rep.doc["anchor_block"] = trace.anchor_block;
      rep.doc["anchor_mass"] = dyadic_to_json(trace.anchor_mass);
      rep.doc["hits"] = trace.hits;
      rep.doc["fraction"] = std::to_string(trace.hits) + "/" + std::to_string(horizon);
      json chain = json::array();
      for (const auto& c : trace.chain) {
        chain.push_back(json{{"step", c.step},
                             {"fanout", c.fanout},
                             {"block", c.block},
                             {"mass_floor_ok", c.mass_floor_ok}});
      }
      rep.doc["chain"] = std::move(chain);
      if (!csv_path.empty()) write_norm_csv(csv_path, trace.norms);
      rep.add("profile-computed", true);
      return rep.finish(out_path);
    }
    throw CliError{2, "no subcommand selected"};
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const horizon_error& e) {
    std::cerr << "horizon: " << e.what() << "\n";
    return 3;
  } catch (const budget_error& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 3;
  } catch (const validation_error& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
