#include "lindyn/io_json.hpp"

#include <cstdio>
#include <fstream>

namespace lindyn {

json dyadic_to_json(const Dyadic& d) {
  return json{{"m", d.mantissa().get_str()}, {"e", d.exponent()}};
}

Dyadic dyadic_from_json(const json& j) {
  return Dyadic::from_parts(j.at("m").get<std::string>(), j.at("e").get<std::int64_t>());
}

json finvec_to_json(const FinVec& v) {
  json arr = json::array();
  for (const auto& e : v.entries()) {
    arr.push_back(json{{"i", e.index},
                       {"m", e.coeff.mantissa().get_str()},
                       {"e", e.coeff.exponent()}});
  }
  return arr;
}

FinVec finvec_from_json(const json& j) {
  std::vector<FinVec::Entry> entries;
  for (const auto& item : j) {
    entries.push_back({item.at("i").get<std::uint64_t>(),
                       Dyadic::from_parts(item.at("m").get<std::string>(),
                                          item.at("e").get<std::int64_t>())});
  }
  return FinVec::from_entries(std::move(entries));
}

json schedule_to_json(const Schedule& s) {
  json j;
  switch (s.kind) {
    case ScheduleKind::Canonical: j["kind"] = "canonical"; break;
    case ScheduleKind::Geometric: j["kind"] = "geometric"; break;
    case ScheduleKind::Explicit: j["kind"] = "explicit"; break;
  }
  j["beta"] = s.beta;
  j["k_max"] = s.k_max;
  j["recurrence"] = s.recurrence == RecurrenceKind::Unit ? "unit" : "matched";
  if (s.kind == ScheduleKind::Explicit) {
    json gens = json::array();
    for (const auto& g : s.generations) {
      gens.push_back(json{{"block_len", g.block_len},
                          {"head_len", g.head_len},
                          {"tail_len", g.tail_len}});
    }
    j["generations"] = gens;
  }
  json tau;
  switch (s.tau.kind) {
    case TauRule::Kind::Affine:
      tau["rule"] = "affine";
      tau["offset"] = s.tau.offset;
      tau["step"] = s.tau.step;
      break;
    case TauRule::Kind::Table:
      tau["table"] = s.tau.table;
      break;
    case TauRule::Kind::Synthesized:
      tau["rule"] = "synthesized";
      if (s.tau.synth_limit >= 0) tau["limit"] = s.tau.synth_limit;
      break;
  }
  j["tau"] = tau;
  return j;
}

Schedule schedule_from_json(const json& j) {
  Schedule s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "canonical") {
    s.kind = ScheduleKind::Canonical;
    s.beta = 8;
  } else if (kind == "geometric") {
    s.kind = ScheduleKind::Geometric;
    s.beta = j.at("beta").get<int>();
  } else if (kind == "explicit") {
    s.kind = ScheduleKind::Explicit;
  } else {
    throw validation_error("unknown schedule kind: " + kind);
  }
  s.k_max = j.at("k_max").get<int>();
  if (j.contains("recurrence")) {
    const std::string r = j.at("recurrence").get<std::string>();
    if (r == "unit") {
      s.recurrence = RecurrenceKind::Unit;
    } else if (r == "matched") {
      s.recurrence = RecurrenceKind::Matched;
    } else {
      throw validation_error("unknown recurrence kind: " + r);
    }
  }
  if (s.kind == ScheduleKind::Explicit) {
    for (const auto& g : j.at("generations")) {
      s.generations.push_back({g.at("block_len").get<std::int64_t>(),
                               g.at("head_len").get<std::int64_t>(),
                               g.at("tail_len").get<std::int64_t>()});
    }
  }
  if (j.contains("tau")) {
    const json& tau = j.at("tau");
    if (tau.contains("table")) {
      s.tau.kind = TauRule::Kind::Table;
      s.tau.table = tau.at("table").get<std::vector<std::int64_t>>();
    } else {
      const std::string rule = tau.at("rule").get<std::string>();
      if (rule == "affine") {
        s.tau.kind = TauRule::Kind::Affine;
        s.tau.offset = tau.value("offset", std::int64_t(1));
        s.tau.step = tau.value("step", std::int64_t(1));
      } else if (rule == "synthesized") {
        s.tau.kind = TauRule::Kind::Synthesized;
        s.tau.synth_limit = tau.value("limit", std::int64_t(-1));
      } else {
        throw validation_error("unknown tau rule: " + rule);
      }
    }
  }
  return s;
}

OperatorSpec load_spec(const std::string& path_or_name, int k_max_override) {
  Schedule s;
  if (path_or_name == "canonical") {
    s = Schedule::canonical(k_max_override >= 0 ? k_max_override : 3);
    s.tau.kind = TauRule::Kind::Synthesized;
  } else if (path_or_name == "toy4") {
    s = Schedule::geometric(4, k_max_override >= 0 ? k_max_override : 9);
    s.tau.kind = TauRule::Kind::Synthesized;
  } else {
    std::ifstream in(path_or_name);
    if (!in) throw validation_error("cannot open schedule file: " + path_or_name);
    json j;
    in >> j;
    s = schedule_from_json(j);
    if (k_max_override >= 0) s.k_max = k_max_override;
  }
  OperatorSpec spec = OperatorSpec::derive(s);
  finalize_synthesized_tau(spec);
  return spec;
}

FinVec load_finvec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open vector file: " + path);
  json j;
  in >> j;
  return finvec_from_json(j);
}

void write_json_atomic(const std::string& path, const json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw error("cannot write " + tmp);
    out << j.dump(2) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw error("cannot move " + tmp + " into place");
  }
}

}  // namespace lindyn
