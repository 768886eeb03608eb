#pragma once

// JSON, CSV and text renderings of module outputs. Output is byte-stable:
// fixed field order, fractions as "num/den", decimals only in text tables.
// Integers are JSON numbers when they fit in int64 and decimal strings
// otherwise; readers accept both.

#include "razak_forge/arith.hpp"
#include "razak_forge/blocks.hpp"
#include "razak_forge/instance.hpp"
#include "razak_forge/rank.hpp"
#include "razak_forge/solve.hpp"
#include "razak_forge/tower.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace razak_forge {

using Json = nlohmann::ordered_json;

enum class Format { json, csv, text };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw std::invalid_argument("unknown format '" + s + "' (expected json, csv or text)");
}

inline std::string to_string(Format f) {
  switch (f) {
    case Format::json:
      return "json";
    case Format::csv:
      return "csv";
    case Format::text:
      return "text";
  }
  return "json";
}

// ---------------------------------------------------------------------------
// scalars

inline Json int_json(const Int& v) {
  if (const auto narrow = to_int64(v)) return Json(*narrow);
  return Json(v.str());
}

inline Int json_int(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) return parse_int(j.get<std::string>());
  throw std::invalid_argument("expected an integer, got " + j.dump());
}

inline Json rational_json(const Rational& q) { return Json(to_string(q)); }

inline Rational json_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  return Rational(json_int(j));
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Right-aligned columns separated by two spaces.
inline std::string format_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << "  ";
      out << std::string(width[c] - cells[c].size(), ' ') << cells[c];
    }
    out << "\n";
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out.str();
}

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ",";
    out += cells[i];
  }
  return out + "\n";
}

// ---------------------------------------------------------------------------
// instances

inline const std::vector<std::string>& corrected_fields() {
  static const std::vector<std::string> f{"k", "l", "m", "p", "r", "s", "q", "a0", "a1", "b0", "b1"};
  return f;
}

inline const std::vector<std::string>& unital_fields() {
  static const std::vector<std::string> f{"k", "l", "m", "p", "s", "a0", "a1", "b0", "b1"};
  return f;
}

inline std::vector<const Int*> field_values(const CorrectedInstance& x) {
  return {&x.k, &x.l, &x.m, &x.p, &x.r, &x.s, &x.q, &x.a0, &x.a1, &x.b0, &x.b1};
}
inline std::vector<Int*> field_values(CorrectedInstance& x) {
  return {&x.k, &x.l, &x.m, &x.p, &x.r, &x.s, &x.q, &x.a0, &x.a1, &x.b0, &x.b1};
}
inline std::vector<const Int*> field_values(const UnitalInstance& x) {
  return {&x.k, &x.l, &x.m, &x.p, &x.s, &x.a0, &x.a1, &x.b0, &x.b1};
}
inline std::vector<Int*> field_values(UnitalInstance& x) {
  return {&x.k, &x.l, &x.m, &x.p, &x.s, &x.a0, &x.a1, &x.b0, &x.b1};
}

template <class Instance>
const std::vector<std::string>& fields_of() {
  if constexpr (std::is_same_v<Instance, CorrectedInstance>) {
    return corrected_fields();
  } else {
    return unital_fields();
  }
}

template <class Instance>
Json instance_json(const Instance& x) {
  Json j = Json::object();
  const auto& names = fields_of<Instance>();
  const auto values = field_values(x);
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = int_json(*values[i]);
  return j;
}

template <class Instance>
Instance instance_from_json(const Json& j) {
  Instance x;
  const auto& names = fields_of<Instance>();
  auto values = field_values(x);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!j.contains(names[i])) throw std::invalid_argument("instance JSON lacks field '" + names[i] + "'");
    *values[i] = json_int(j.at(names[i]));
  }
  return x;
}

template <class Instance>
std::string instances_csv(const std::vector<Instance>& xs) {
  std::string out = csv_line(fields_of<Instance>());
  for (const auto& x : xs) {
    std::vector<std::string> cells;
    for (const Int* v : field_values(x)) cells.push_back(v->str());
    out += csv_line(cells);
  }
  return out;
}

template <class Instance>
std::vector<std::vector<std::string>> instance_rows(const std::vector<Instance>& xs) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& x : xs) {
    std::vector<std::string> cells;
    for (const Int* v : field_values(x)) cells.push_back(v->str());
    rows.push_back(std::move(cells));
  }
  return rows;
}

inline Json failures_json(const std::vector<EquationFailure>& fs) {
  Json arr = Json::array();
  for (const auto& f : fs) {
    arr.push_back(Json{{"equation", f.equation}, {"lhs", int_json(f.lhs)}, {"rhs", int_json(f.rhs)}});
  }
  return arr;
}

inline Json verdict_json(const Verdict& v) { return Json{{"ok", v.ok}, {"failures", failures_json(v.failures)}}; }

// ---------------------------------------------------------------------------
// blocks

inline std::string endpoint_json_text(const EndpointImage& e) { return e.to_string(); }

inline EndpointImage endpoint_from_text(const std::string& s) {
  if (s == "x0") return EndpointImage::x0();
  if (s == "x1") return EndpointImage::x1();
  if (s.size() > 1 && s[0] == 'z') {
    const Int j = parse_int(s.substr(1));
    if (j >= 1) return EndpointImage::free(static_cast<std::size_t>(j));
  }
  throw std::invalid_argument("bad endpoint image '" + s + "'");
}

inline Json eigenmap_json(const Eigenmap& e) {
  if (e.is_coord()) {
    return Json{{"kind", "coord"}, {"axis", e.coord().axis}, {"flipped", e.coord().flipped}};
  }
  return Json{{"kind", "path"}, {"e0", e.path().e0.to_string()}, {"e1", e.path().e1.to_string()}};
}

inline Eigenmap eigenmap_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "coord") return Coord{j.at("axis").get<std::size_t>(), j.at("flipped").get<bool>()};
  if (kind == "path") {
    return Path{endpoint_from_text(j.at("e0").get<std::string>()), endpoint_from_text(j.at("e1").get<std::string>())};
  }
  throw std::invalid_argument("bad eigenmap kind '" + kind + "'");
}

inline Json inventory_json(const EigenmapInventory& inv) {
  Json maps = Json::array();
  for (const auto& e : inv.eigenmaps()) maps.push_back(eigenmap_json(e));
  return Json{{"source", {{"k", int_json(inv.source().k)}, {"cube_dim", int_json(inv.source().cube_dim)}}},
              {"target_l", int_json(inv.target_ell())},
              {"target_blocks", inv.target_blocks()},
              {"m", int_json(inv.multiplicity())},
              {"free_points", inv.free_points()},
              {"p", int_json(inv.p())},
              {"r", int_json(inv.zero_block())},
              {"eigenmaps", std::move(maps)}};
}

inline EigenmapInventory inventory_from_json(const Json& j) {
  std::vector<Eigenmap> maps;
  for (const auto& e : j.at("eigenmaps")) maps.push_back(eigenmap_from_json(e));
  EigenmapInventory inv(BlockParams{json_int(j.at("source").at("k")), json_int(j.at("source").at("cube_dim"))},
                        json_int(j.at("target_l")), j.at("target_blocks").get<std::size_t>(), json_int(j.at("m")),
                        j.at("free_points").get<std::size_t>(), std::move(maps), json_int(j.at("r")));
  if (j.contains("p") && json_int(j.at("p")) != inv.p()) {
    throw std::invalid_argument("inventory JSON: p does not match the eigenmap list");
  }
  return inv;
}

inline Json profile_json(const EndpointProfile& prof) {
  Json y0 = Json::array(), y1 = Json::array();
  for (const auto& v : prof.free_y0) y0.push_back(int_json(v));
  for (const auto& v : prof.free_y1) y1.push_back(int_json(v));
  return Json{{"a0", int_json(prof.a0)}, {"a1", int_json(prof.a1)}, {"b0", int_json(prof.b0)},
              {"b1", int_json(prof.b1)}, {"s", prof.s},                {"free_y0", std::move(y0)},
              {"free_y1", std::move(y1)}};
}

inline EndpointProfile profile_from_json(const Json& j) {
  EndpointProfile prof{json_int(j.at("a0")), json_int(j.at("a1")), json_int(j.at("b0")), json_int(j.at("b1")),
                       j.at("s").get<std::size_t>(), {}, {}};
  for (const auto& v : j.at("free_y0")) prof.free_y0.push_back(json_int(v));
  for (const auto& v : j.at("free_y1")) prof.free_y1.push_back(json_int(v));
  return prof;
}

inline Json admissibility_json(const AdmissibilityVerdict& v) {
  return Json{{"admissible", v.admissible},
              {"q", v.q_witness ? int_json(*v.q_witness) : Json(nullptr)},
              {"violations", failures_json(v.violations)}};
}

inline Json obstruction_identity_json(const ObstructionIdentity& id) {
  Json comb = Json::array();
  for (const auto& [name, mult] : id.combination) comb.push_back(Json{{"residual", name}, {"multiplier", mult.to_string()}});
  return Json{{"conclusion", id.conclusion},
              {"target", id.target.to_string()},
              {"combination", std::move(comb)},
              {"remainder", id.remainder.to_string()},
              {"expanded_identity", id.expanded.to_string()},
              {"certified", id.certified()}};
}

inline Json obstruction_json(const ObstructionCertificate& c) {
  return Json{{"b0_vanishes", obstruction_identity_json(c.b0_vanishes)},
              {"a0_equals_m", obstruction_identity_json(c.a0_equals_m)},
              {"certified", c.certified()}};
}

// ---------------------------------------------------------------------------
// family

inline Json family_certificate_json(const FamilyCertificate& c) {
  Json res = Json::array();
  for (const auto& r : c.residuals) {
    res.push_back(Json{{"equation", r.name}, {"residual", r.poly.to_string()}, {"zero", r.poly.is_zero()}});
  }
  return Json{{"residuals", std::move(res)},
              {"equations_certified", c.equations_certified()},
              {"equations_total", FamilyCertificate::equation_count}};
}

inline Json family_sweep_json(const FamilySweep& s) {
  Json fails = Json::array();
  for (const auto& f : s.failures) fails.push_back(Json{{"s", f[0]}, {"k", f[1]}, {"u", f[2]}});
  return Json{{"bound", s.bound}, {"total", s.total}, {"passed", s.passed}, {"failures", std::move(fails)}};
}

// ---------------------------------------------------------------------------
// tower

inline Json opt_int_json(const std::optional<Int>& v) { return v ? int_json(*v) : Json(nullptr); }

inline std::optional<Int> json_opt_int(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return json_int(j);
}

inline Json stage_json(const Stage& st) {
  return Json{{"index", st.index},
              {"span", st.span},
              {"k", int_json(st.k)},
              {"l", int_json(st.l)},
              {"m", int_json(st.m)},
              {"m_factor", int_json(st.m_factor)},
              {"p", int_json(st.p)},
              {"r", int_json(st.r)},
              {"s", opt_int_json(st.s)},
              {"u", opt_int_json(st.u)},
              {"q", opt_int_json(st.q)},
              {"a0", int_json(st.a0)},
              {"a1", int_json(st.a1)},
              {"b0", int_json(st.b0)},
              {"b1", int_json(st.b1)},
              {"unflipped", int_json(st.unflipped)},
              {"flipped", int_json(st.flipped)},
              {"d", int_json(st.d)},
              {"cube_dim", int_json(st.cube_dim)},
              {"f", rational_json(st.f)}};
}

inline Stage stage_from_json(const Json& j) {
  Stage st;
  st.index = j.at("index").get<std::size_t>();
  st.span = j.at("span").get<std::size_t>();
  st.k = json_int(j.at("k"));
  st.l = json_int(j.at("l"));
  st.m = json_int(j.at("m"));
  st.m_factor = json_int(j.at("m_factor"));
  st.p = json_int(j.at("p"));
  st.r = json_int(j.at("r"));
  st.s = json_opt_int(j.at("s"));
  st.u = json_opt_int(j.at("u"));
  st.q = json_opt_int(j.at("q"));
  st.a0 = json_int(j.at("a0"));
  st.a1 = json_int(j.at("a1"));
  st.b0 = json_int(j.at("b0"));
  st.b1 = json_int(j.at("b1"));
  st.unflipped = json_int(j.at("unflipped"));
  st.flipped = json_int(j.at("flipped"));
  st.d = json_int(j.at("d"));
  st.cube_dim = json_int(j.at("cube_dim"));
  st.f = json_rational(j.at("f"));
  return st;
}

inline Json stages_json(const std::vector<Stage>& stages) {
  Json arr = Json::array();
  for (const auto& st : stages) arr.push_back(stage_json(st));
  return arr;
}

inline std::vector<Stage> stages_from_json(const Json& j) {
  std::vector<Stage> out;
  for (const auto& s : j) out.push_back(stage_from_json(s));
  return out;
}

inline std::string stages_csv(const std::vector<Stage>& stages) {
  std::string out = csv_line({"index", "span", "k", "l", "m", "m_factor", "p", "r", "a0", "a1", "b0", "b1",
                              "unflipped", "flipped", "d", "cube_dim", "f"});
  for (const auto& st : stages) {
    out += csv_line({std::to_string(st.index), std::to_string(st.span), st.k.str(), st.l.str(), st.m.str(),
                     st.m_factor.str(), st.p.str(), st.r.str(), st.a0.str(), st.a1.str(), st.b0.str(), st.b1.str(),
                     st.unflipped.str(), st.flipped.str(), st.d.str(), st.cube_dim.str(), to_string(st.f)});
  }
  return out;
}

/// stage, k, l, m, p, d, f (exact and 6 decimals), deficit 1 - f.
inline std::string stages_text(const std::vector<Stage>& stages) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& st : stages) {
    rows.push_back({std::to_string(st.index), st.k.str(), st.l.str(), st.m.str(), st.p.str(), st.d.str(),
                    to_string(st.f), to_decimal(st.f, 6), to_string(Rational(1 - st.f))});
  }
  return format_table({"stage", "k", "l", "m", "p", "d", "f", "f~", "deficit"}, rows);
}

inline Json rationals_json(const std::vector<Rational>& qs) {
  Json arr = Json::array();
  for (const auto& q : qs) arr.push_back(rational_json(q));
  return arr;
}

inline std::vector<Rational> json_rationals(const Json& j) {
  std::vector<Rational> out;
  for (const auto& q : j) out.push_back(json_rational(q));
  return out;
}

inline Json opt_rational_json(const std::optional<Rational>& q) { return q ? rational_json(*q) : Json(nullptr); }

inline std::optional<Rational> json_opt_rational(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return json_rational(j);
}

inline Json perforation_json(const PerforationReport& r) {
  return Json{{"index", to_string(r.index)},
              {"factors", rationals_json(r.factors)},
              {"deficits", rationals_json(r.deficits)},
              {"ratios", rationals_json(r.ratios)},
              {"partial_product", rational_json(r.partial_product)},
              {"deficit_sum", rational_json(r.deficit_sum)},
              {"same_index_product", rational_json(r.same_index_product)},
              {"offset_index_product", rational_json(r.offset_index_product)},
              {"rho_ceiling", rational_json(r.rho_ceiling)},
              {"rho", opt_rational_json(r.rho)},
              {"tail_bound", opt_rational_json(r.tail_bound)},
              {"lower_bound", opt_rational_json(r.lower_bound)},
              {"verdict", to_string(r.verdict)},
              {"note", r.note}};
}

inline PerforationReport perforation_from_json(const Json& j) {
  PerforationReport r;
  const auto index = j.at("index").get<std::string>();
  r.index = index == "offset" ? IndexMode::offset : IndexMode::same;
  r.factors = json_rationals(j.at("factors"));
  r.deficits = json_rationals(j.at("deficits"));
  r.ratios = json_rationals(j.at("ratios"));
  r.partial_product = json_rational(j.at("partial_product"));
  r.deficit_sum = json_rational(j.at("deficit_sum"));
  r.same_index_product = json_rational(j.at("same_index_product"));
  r.offset_index_product = json_rational(j.at("offset_index_product"));
  r.rho_ceiling = json_rational(j.at("rho_ceiling"));
  r.rho = json_opt_rational(j.at("rho"));
  r.tail_bound = json_opt_rational(j.at("tail_bound"));
  r.lower_bound = json_opt_rational(j.at("lower_bound"));
  const auto verdict = j.at("verdict").get<std::string>();
  if (verdict == "certified_positive") {
    r.verdict = PerforationVerdict::certified_positive;
  } else if (verdict == "certified_not_applicable") {
    r.verdict = PerforationVerdict::certified_not_applicable;
  } else if (verdict == "inconclusive") {
    r.verdict = PerforationVerdict::inconclusive;
  } else {
    throw std::invalid_argument("bad verdict '" + verdict + "'");
  }
  r.note = j.at("note").get<std::string>();
  return r;
}

inline std::string perforation_text(const std::vector<Stage>& stages, const PerforationReport& r) {
  std::string out = stages_text(stages);
  out += "index: " + to_string(r.index) + "\n";
  out += "partial product: " + to_string(r.partial_product) + " (" + to_decimal(r.partial_product, 6) + ")\n";
  out += "deficit sum: " + to_string(r.deficit_sum) + " (" + to_decimal(r.deficit_sum, 6) + ")\n";
  if (r.rho) out += "rho: " + to_string(*r.rho) + " (" + to_decimal(*r.rho, 6) + ")\n";
  if (r.tail_bound) out += "tail bound: " + to_string(*r.tail_bound) + " (" + to_decimal(*r.tail_bound, 6) + ")\n";
  if (r.lower_bound) {
    out += "product lower bound: " + to_string(*r.lower_bound) + " (" + to_decimal(*r.lower_bound, 6) + ")\n";
  }
  out += "verdict: " + to_string(r.verdict);
  if (!r.note.empty()) out += " (" + r.note + ")";
  return out + "\n";
}

inline Json search_json(const ScheduleSearch& s) {
  Json outcomes = Json::array();
  for (const auto& o : s.outcomes) {
    outcomes.push_back(Json{{"policy", o.policy.name()}, {"report", perforation_json(o.report)}});
  }
  return Json{{"best", s.best_outcome().policy.name()}, {"outcomes", std::move(outcomes)}};
}

inline std::string search_text(const ScheduleSearch& s) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& o : s.outcomes) {
    const auto& r = o.report;
    rows.push_back({o.policy.name(), to_string(r.verdict), r.rho ? to_decimal(*r.rho, 6) : "-",
                    r.lower_bound ? to_decimal(*r.lower_bound, 6) : "-", to_decimal(r.partial_product, 6)});
  }
  std::string out = format_table({"policy", "verdict", "rho", "lower_bound", "partial_product"}, rows);
  const auto& best = s.best_outcome();
  out += "best: " + best.policy.name() + " (" + to_string(best.report.verdict);
  if (best.report.lower_bound) out += ", lower bound " + to_decimal(*best.report.lower_bound, 6);
  return out + ")\n";
}

// ---------------------------------------------------------------------------
// rank

inline Json rank_json(const RankFunction& f) {
  return Json{{"grid", {{"dim", f.grid().dim()}, {"resolution", f.grid().resolution()}}},
              {"fiber_bound", f.fiber_bound()},
              {"values", f.values()}};
}

inline RankFunction rank_from_json(const Json& j) {
  const Grid grid(j.at("grid").at("dim").get<std::size_t>(), j.at("grid").at("resolution").get<std::size_t>());
  return RankFunction(grid, j.at("values").get<std::vector<std::uint64_t>>(), j.at("fiber_bound").get<std::uint64_t>());
}

inline Json demo_json(const DemoReport& d) {
  return Json{{"k", d.k},
              {"n", d.n},
              {"perforation_inequality", d.perforation_inequality},
              {"dominated_by_n", d.dominated_by_n},
              {"domination_violation", d.domination_violation ? Json(*d.domination_violation) : Json(nullptr)},
              {"disclaimer", d.disclaimer}};
}

inline std::string demo_text(const DemoReport& d) {
  std::string out;
  out += "(k+1) rank(a) <= k rank(b) with k=" + std::to_string(d.k) + ": " +
         (d.perforation_inequality ? "holds" : "fails") + "\n";
  out += "rank(a) <= n rank(b) with n=" + std::to_string(d.n) + ": " + (d.dominated_by_n ? "holds" : "fails");
  if (d.domination_violation) out += " (first violation at grid index " + std::to_string(*d.domination_violation) + ")";
  out += "\n";
  if (!d.dominated_by_n) out += "[a] <= n[b] is ruled out at rank level\n";
  out += "note: " + d.disclaimer + "\n";
  return out;
}

}  // namespace razak_forge
