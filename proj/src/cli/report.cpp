#include "imapk/cli/report.hpp"

#include <algorithm>
#include <sstream>

#include "imapk/entropy.hpp"
#include "imapk/error.hpp"
#include "imapk/ktheory.hpp"
#include "imapk/markov.hpp"

namespace imapk::cli {

Command parse_command(std::string_view name) {
  if (name == "orbit") return Command::Orbit;
  if (name == "markov") return Command::Markov;
  if (name == "ktheory") return Command::KTheory;
  if (name == "entropy") return Command::Entropy;
  if (name == "classify") return Command::Classify;
  if (name == "all") return Command::All;
  fail(ErrorKind::SyntaxError, "unknown command '" + std::string(name) + "'");
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Orbit: return "orbit";
    case Command::Markov: return "markov";
    case Command::KTheory: return "ktheory";
    case Command::Entropy: return "entropy";
    case Command::Classify: return "classify";
    case Command::All: return "all";
  }
  return "";
}

RunOptions merge_options(RunOptions o, const RunOptions& flags, bool cap_set, bool tol_set) {
  if (cap_set) o.cap = flags.cap;
  if (tol_set) o.tol = flags.tol;
  o.assert_cyclic = o.assert_cyclic || flags.assert_cyclic;
  o.assert_idoc = o.assert_idoc || flags.assert_idoc;
  o.assert_orbit_infinite = o.assert_orbit_infinite || flags.assert_orbit_infinite;
  if (flags.partition) o.partition = flags.partition;
  return o;
}

namespace {

using nlohmann::json;

constexpr std::size_t kOrbitRows = 64;

json scalar(const Scalar& s) { return s.to_short_string(); }

json scalars(const std::vector<Scalar>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(scalar(s));
  return a;
}

json tri(Tri t) { return std::string(to_string(t)); }

json flags_json(const FlagReport& f) {
  json j = {{"surjective", tri(f.surjective)},
            {"eventually_surjective", tri(f.eventually_surjective)},
            {"essentially_injective", tri(f.essentially_injective)},
            {"transitive", tri(f.transitive)},
            {"exact", tri(f.exact)},
            {"af", tri(f.af)},
            {"f_simple", tri(f.f_simple)},
            {"o_simple", tri(f.o_simple)},
            {"provenance", f.provenance}};
  if (f.stabilization_depth >= 0) {
    j["stabilization_depth"] = f.stabilization_depth;
    json r = json::array();
    for (const auto& [a, b] : f.eventual_range) r.push_back({scalar(a), scalar(b)});
    j["eventual_range"] = r;
  }
  return j;
}

json orbit_rows(const std::vector<Scalar>& pts) {
  json rows = json::array();
  for (std::size_t i = 0; i < pts.size() && i < kOrbitRows; ++i)
    rows.push_back({{"step", i}, {"value", scalar(pts[i])}, {"approx", pts[i].to_double()}});
  return rows;
}

std::string status_text(const OrbitStatus& s) { return s.to_string(); }

class Pipeline {
 public:
  Pipeline(Command c, const MapSpecFile& spec) : cmd_(c), spec_(spec), m_(spec.built.map), o_(spec.options) {}

  Report run() {
    Report r;
    r.json["command"] = std::string(to_string(cmd_));
    r.json["map"] = map_json();
    r.json["options"] = options_json();
    flags_ = dynamics_flags(m_);
    for (const auto& c : spec_.built.certificates) apply_certificate(flags_, c);

    const bool all = cmd_ == Command::All || cmd_ == Command::Classify;
    if (cmd_ == Command::Orbit || cmd_ == Command::All) r.json["orbit"] = orbit();
    if (cmd_ != Command::Orbit) r.json["markov"] = markov();
    if (cmd_ == Command::KTheory || all) r.json["k_theory"] = ktheory();
    if (cmd_ == Command::Entropy || all) r.json["entropy"] = entropy_report(m_, flags_, markov_, o_.tol).to_json();
    if (all) {
      Classification c = classify(m_, inputs());
      for (const auto& ref : c.paper_refs) ref_(ref);
      r.json["classification"] = c.to_json();
      if (c.needed_assertion) r.exit_code = 2;
    }
    r.json["flags"] = flags_json(flags_);
    r.json["hypothesis_ledger"] = {{"certificates", certificates_}, {"assertions", assertions_}};
    std::sort(refs_.begin(), refs_.end());
    r.json["paper_refs"] = refs_;
    r.json["exit_code"] = r.exit_code;
    return r;
  }

 private:
  void ref_(const std::string& k) {
    if (std::find(refs_.begin(), refs_.end(), k) == refs_.end()) refs_.push_back(k);
  }
  void assertion_(const std::string& flag, const std::string& what) {
    assertions_.push_back({{"flag", flag}, {"claim", what}});
  }

  json map_json() const {
    json j = {{"partition", scalars(m_.partition())}, {"notes", m_.notes()}, {"spec_text", map_spec_text(m_)}};
    json br = json::array();
    for (const auto& b : m_.branches()) br.push_back({{"slope", scalar(b.slope)}, {"intercept", scalar(b.intercept)}});
    j["branches"] = br;
    if (m_.field()) {
      json poly = json::array();
      for (const auto& c : m_.field()->min_poly().coeffs()) poly.push_back(c.get_str());
      j["field"] = {{"poly", poly}, {"iso", {m_.field()->lo().get_str(), m_.field()->hi().get_str()}}};
    } else {
      j["field"] = nullptr;
    }
    j["family"] = spec_.family ? spec_.family->to_json() : json(nullptr);
    if (spec_.built.realized_partition) j["realized_partition"] = scalars(*spec_.built.realized_partition);
    return j;
  }

  json options_json() const {
    json j = {{"cap", o_.cap},
              {"tol", o_.tol.get_str()},
              {"assert_cyclic", o_.assert_cyclic},
              {"assert_idoc", o_.assert_idoc},
              {"assert_orbit_infinite", o_.assert_orbit_infinite}};
    j["partition"] = o_.partition ? scalars(*o_.partition) : json(nullptr);
    return j;
  }

  json orbit() {
    json j;
    json crit = json::array();
    for (const auto& a : m_.partition()) {
      OrbitResult r = forward_orbit(m_, a, o_.cap);
      crit.push_back({{"seed", scalar(a)},
                      {"status", status_text(r.status)},
                      {"threads", r.threads.size()},
                      {"distinct_points", r.point_set.size()},
                      {"rows", orbit_rows(r.points)}});
    }
    j["critical_orbits"] = crit;
    CriticalClosure cc = critical_closure(m_, o_.cap);
    j["critical_closure"] = {{"complete", cc.complete},
                             {"size", cc.points.size()},
                             {"certificate", cc.certificate ? json(cc.certificate->describe()) : json(nullptr)}};
    if (is_exchange_map(m_)) {
      const IdocResult& d = idoc();
      j["idoc"] = {{"result", d.to_string()}, {"witness", d.witness}, {"convention", d.convention}};
    }
    if (unimodal_shape(m_)) {
      auto d = unimodal_orbit_data(m_, o_.cap);
      j["unimodal_orbit_of_0"] = {{"status", status_text(d.status)},
                                  {"signs", d.signs.size() > kOrbitRows
                                                ? std::vector<int>(d.signs.begin(), d.signs.begin() + kOrbitRows)
                                                : d.signs},
                                  {"k", d.k},
                                  {"p", d.p},
                                  {"case", d.which ? json(std::string(to_string(*d.which))) : json(nullptr)}};
    }
    if (spec_.built.family == Family::Beta) {
      auto d = beta_orbit_data(m_, *spec_.built.beta, o_.cap);
      if (d.digits.size() > kOrbitRows) d.digits.resize(kOrbitRows);
      j["beta_orbit_of_1"] = {{"status", status_text(d.status)},
                              {"digits", d.digits},
                              {"k", d.k},
                              {"p", d.p},
                              {"case", d.which ? json(std::string(to_string(*d.which))) : json(nullptr)}};
    }
    return j;
  }

  const IdocResult& idoc() {
    if (!idoc_) idoc_ = idoc_check(m_, o_.cap);
    return *idoc_;
  }

  json markov() {
    if (markov_done_) return markov_json_;
    markov_done_ = true;
    json& j = markov_json_;
    if (o_.partition) {
      markov_ = markov_from_partition(m_, *o_.partition);
      j["detection"] = "user partition";
    } else {
      MarkovDetection d = detect_markov(m_, o_.cap);
      j["detection"] = d.to_string();
      markov_ = d.data;
    }
    if (!markov_) return j;
    ref_("Def 1.43");
    const MarkovData& md = *markov_;
    GraphFlags g = graph_flags(md.matrix);
    DynamicsCertificate cert = markov_certificate(md, g, flags_.surjective == Tri::Yes);
    apply_certificate(flags_, cert);
    certificates_.push_back(cert.source);
    separation_ = separation_check(m_, md);
    j["data"] = imapk::to_json(md);
    j["graph"] = imapk::to_json(g);
    j["separation"] = separation_->to_string();

    IntMatrix ay = md.matrix;
    std::string route = "coker/ker of I - A";
    if (g.eventual_range.size() < md.size()) {
      ay = restrict_to(md.matrix, g.eventual_range);
      route = "coker/ker of I - A_Y (restricted to the eventual range; invariants of the Morita-equivalent system)";
      j["restricted_matrix"] = imapk::to_json(ay);
    }
    KPair k;
    k.groups = kgroups_from_incidence(ay);
    k.strength = "unconditional";
    k.route = route;
    markov_k_ = k;
    ref_("Cor 1.45");
    j["dimension_triple"] = stationary_dimension_triple(ay).to_json();
    return j;
  }

  json ktheory() {
    json j;
    const bool surjective = flags_.surjective == Tri::Yes;
    Cyclicity cyc = Cyclicity::Unknown;
    std::string cyc_source;
    auto shape = unimodal_shape(m_);
    if (shape) {
      cyc = Cyclicity::Certified;
      cyc_source = "I(0,1) is cyclic for surjective unimodal maps with tau(1) = 0";
    } else if (spec_.built.family == Family::Beta) {
      cyc = Cyclicity::Certified;
      cyc_source = "I(0,1) is cyclic for beta-transformations";
    } else if (o_.assert_cyclic) {
      cyc = Cyclicity::Asserted;
      cyc_source = "--assert-cyclic";
      assertion_("--assert-cyclic", "I(0,1) is a cyclic element of DG");
    }

    std::optional<MinPolyReport> chosen;
    json mp;
    if (surjective) {
      try {
        MinPolyIteration it = minimal_polynomial_iter(m_, o_.cap);
        mp["iteration"] = it.report ? json(it.report->poly.to_string())
                                    : json("not found within caps (" + std::to_string(it.iterations) +
                                           " iterations, " + std::to_string(it.breakpoints) + " breakpoints)");
        mp["iterations"] = it.iterations;
        if (it.report) chosen = it.report;
      } catch (const Error& e) {
        mp["iteration"] = std::string(e.what());
      }
      ref_("Prop 1.47.3");
    } else {
      mp["iteration"] = "skipped: the map is not surjective";
    }
    std::optional<IntPoly> closed;
    std::optional<OrbitStatus> critical_status;
    Family fam = Family::Other;
    if (shape) {
      fam = Family::Unimodal;
      auto d = unimodal_orbit_data(m_, o_.cap);
      critical_status = d.status;
      if (d.which) {
        closed = unimodal_minpoly(d.signs, d.k, d.p, *d.which);
        mp["closed_form"] = {{"family", "unimodal"}, {"case", to_string(*d.which)}, {"poly", closed->to_string()}};
        ref_("Lemma 1.50.1");
      }
    } else if (spec_.built.family == Family::Beta) {
      fam = Family::Beta;
      auto d = beta_orbit_data(m_, *spec_.built.beta, o_.cap);
      critical_status = d.status;
      if (d.which) {
        closed = beta_minpoly(d.digits, d.k, d.p, *d.which);
        mp["closed_form"] = {{"family", "beta"}, {"case", to_string(*d.which)}, {"poly", closed->to_string()}};
        ref_("Lemma 1.58");
      }
    }
    if (closed && chosen) mp["routes_agree"] = *closed == chosen->poly;
    if (closed && !chosen) {
      chosen = MinPolyReport{*closed,
                             fam == Family::Unimodal ? MinPolyReport::Method::UnimodalClosedForm
                                                     : MinPolyReport::Method::BetaClosedForm,
                             Cyclicity::Unknown, ""};
    }
    json routes;
    if (chosen) {
      chosen->cyclicity = cyc;
      chosen->cyclicity_source = cyc_source;
      mp["report"] = chosen->to_json();
      if (cyc != Cyclicity::Unknown) {
        minpoly_k_ = kgroups_from_minpoly(*chosen);
        routes["minimal_polynomial"] = minpoly_k_->to_json();
      } else {
        routes["minimal_polynomial"] = "refused: cyclicity of I(0,1) not established (--assert-cyclic)";
        pending_.push_back("--assert-cyclic");
      }
    }
    j["minimal_polynomial"] = mp;

    if (critical_status && critical_status->kind != OrbitStatus::Kind::Closed) {
      InfinityEvidence ev = InfinityEvidence::CapReached;
      if (critical_status->kind == OrbitStatus::Kind::ProvablyInfinite) {
        ev = InfinityEvidence::Certificate;
        certificates_.push_back("critical orbit infinite: " + critical_status->to_string());
      } else if (o_.assert_orbit_infinite) {
        ev = InfinityEvidence::Asserted;
        assertion_("--assert-orbit-infinite", "the critical orbit is not eventually periodic");
      } else {
        pending_.push_back("--assert-orbit-infinite");
      }
      nonperiodic_k_ = nonperiodic_kgroups(fam, ev);
      routes["nonperiodic"] = nonperiodic_k_->to_json();
      ref_(fam == Family::Unimodal ? "Thm 1.50.5" : "Prop 1.60");
    }

    if (markov_k_) routes["incidence"] = markov_k_->to_json();
    if (is_exchange_map(m_)) {
      const IdocResult& d = idoc();
      auto k = exchange_kgroups(m_, d);
      if (k && d.kind == IdocResult::Kind::HoldsUpToCap && o_.assert_idoc && k->strength != "unconditional") {
        k->strength = "asserted";
        assertion_("--assert-idoc", "the exchange satisfies IDOC");
      }
      if (k) family_k_ = k;
      routes["exchange"] = k ? k->to_json() : json("not applicable: " + d.to_string());
      ref_("Prop 1.57");
    }
    if (spec_.family && spec_.family->kind == FamilySpec::Kind::Multimodal) {
      try {
        family_k_ = multimodal_kgroups(m_, o_.assert_orbit_infinite);
        assertion_("--assert-orbit-infinite", "critical orbits are infinite and pairwise disjoint");
        routes["multimodal"] = family_k_->to_json();
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::RefusedWithoutAssertion) pending_.push_back("--assert-orbit-infinite");
        routes["multimodal"] = std::string(e.what());
      }
      ref_("Example 1.54");
    }
    j["routes"] = routes.is_null() ? json::object() : routes;

    if (markov_k_ && minpoly_k_ && minpoly_k_->strength == "unconditional") {
      const KGroups& a = markov_k_->groups;
      const KGroups& b = minpoly_k_->groups;
      j["route_consistency"] =
          a.torsion == b.torsion && a.free_rank == b.free_rank && a.k1_rank == b.k1_rank ? "agree" : "disagree";
    }
    if (surjective) {
      j["module_generators"] = module_generators(m_).to_json();
      ref_("Thm 1.31");
    }
    return j;
  }

  ClassifyInputs inputs() const {
    ClassifyInputs in;
    in.flags = flags_;
    in.markov = markov_;
    in.separation = separation_;
    in.markov_k = markov_k_;
    in.minpoly_k = minpoly_k_;
    in.nonperiodic_k = nonperiodic_k_;
    in.family_k = family_k_;
    in.pending_assertions = pending_;
    return in;
  }

  Command cmd_;
  const MapSpecFile& spec_;
  const PMMap& m_;
  RunOptions o_;
  FlagReport flags_;
  std::optional<MarkovData> markov_;
  std::optional<SeparationResult> separation_;
  std::optional<KPair> markov_k_, minpoly_k_, nonperiodic_k_, family_k_;
  std::optional<IdocResult> idoc_;
  std::vector<std::string> pending_;
  std::vector<std::string> refs_;
  std::vector<std::string> certificates_;
  json assertions_ = json::array();
  bool markov_done_ = false;
  json markov_json_;
};

Report error_report(Command c, const Error& e) {
  Report r;
  r.exit_code = 1;
  r.json = {{"command", std::string(to_string(c))},
            {"error", {{"kind", std::string(error_kind_name(e.kind()))}, {"message", e.what()}}},
            {"exit_code", 1}};
  return r;
}

void render(std::ostringstream& o, const json& j, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "rows" || it.key() == "spec_text") continue;
    const json& v = it.value();
    if (v.is_object()) {
      o << pad << it.key() << ":\n";
      render(o, v, indent + 2);
    } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const json& e) { return e.is_object(); })) {
      o << pad << it.key() << ":\n";
      for (const auto& e : v) {
        o << pad << "  -\n";
        render(o, e, indent + 4);
      }
    } else if (v.is_string()) {
      o << pad << it.key() << ": " << v.get<std::string>() << "\n";
    } else {
      o << pad << it.key() << ": " << v.dump() << "\n";
    }
  }
}

}  // namespace

std::string Report::text() const {
  std::ostringstream o;
  render(o, json, 0);
  return o.str();
}

Report run(Command command, const MapSpecFile& spec) {
  try {
    return Pipeline(command, spec).run();
  } catch (const Error& e) {
    return error_report(command, e);
  }
}

Report run_text(Command command, std::string_view spec_text) {
  try {
    return run(command, parse_spec(spec_text));
  } catch (const Error& e) {
    return error_report(command, e);
  }
}

}  // namespace imapk::cli
