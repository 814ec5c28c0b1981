#include "report.hpp"

#include <json.hpp>
#include <sstream>

#include "errors.hpp"
#include "famfile.hpp"
#include "forms.hpp"

namespace ct {
namespace {

using nlohmann::json;

std::string rat_str(const Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

std::string mono_str(const Monomial& m, const VarPool& pool) {
  Poly p;
  p.add_term(m, 1);
  return poly_str(p, pool);
}

json point_json(const VarPool& pool, const std::map<VarId, Rational>& pt) {
  json o = json::object();
  for (const auto& [v, val] : pt) o[pool.name(v)] = rat_str(val);
  return o;
}

json regularity_json(const VarPool& pool, const RegularityResult& r) {
  json o;
  o["regular"] = r.regular;
  if (r.witness) o["witness"] = poly_str(*r.witness, pool);
  return o;
}

}  // namespace

std::string json_value(const Family& f, const RatFunc& v) {
  json o;
  o["value"] = ratfunc_str(v, f.pool);
  return o.dump();
}

std::string json_form(const Family& f, const RelativeForm& w) {
  json o;
  o["value"] = form_str(w, f.pool);
  return o.dump();
}

std::string json_degree(int degree) {
  json o;
  o["degree"] = degree;
  return o.dump();
}

std::string json_classify(const Family& f, const ClassifyResult& r) {
  json o;
  o["degree"] = r.degree;
  o["newton_consistent"] = r.newton_consistent;
  json entries = json::array();
  for (const auto& e : r.entries) {
    json je;
    je["monomial"] = mono_str(e.mono, f.pool);
    je["trace"] = ratfunc_str(e.trace, f.pool);
    je["regularity"] = regularity_json(f.pool, e.regularity);
    entries.push_back(std::move(je));
  }
  o["entries"] = std::move(entries);
  return o.dump();
}

std::string json_check(const Family& f, const Verdict& v) {
  json o;
  o["verdict"] = verdict_kind_str(v.kind);
  o["degree"] = v.degree;
  o["monomial_degree_bound"] = v.monomial_degree_bound;
  o["form_degree_bound"] = v.form_degree_bound;
  json table;
  table["constant"] = v.degrees.constant;
  json cells = json::array();
  for (const auto& c : v.degrees.cells) {
    json jc;
    jc["stratum"] = c.stratum;
    jc["direction"] = c.direction;
    jc["degree"] = c.degree;
    cells.push_back(std::move(jc));
  }
  table["cells"] = std::move(cells);
  o["degree_table"] = std::move(table);
  json ws = json::array();
  for (const auto& w : v.witnesses) {
    json jw;
    jw["source"] = w.source;
    jw["value"] = ratfunc_str(w.value, f.pool);
    jw["regularity"] = regularity_json(f.pool, w.regularity);
    jw["integrality_tested"] = w.integrality_tested;
    if (w.integrality) {
      json ji;
      ji["degree"] = w.integrality->degree;
      json coeffs = json::array();
      for (const auto& c : w.integrality->coeffs) coeffs.push_back(poly_str(c, f.pool));
      ji["coeffs"] = std::move(coeffs);
      jw["integrality"] = std::move(ji);
    }
    ws.push_back(std::move(jw));
  }
  o["witnesses"] = std::move(ws);
  if (!v.detail.empty()) o["detail"] = v.detail;
  return o.dump();
}

std::string json_weights(const Family& f, const std::optional<WeightAssignment>& w) {
  json o;
  o["found"] = w.has_value();
  if (w) {
    json comps = json::array();
    for (std::size_t i = 0; i < f.components.size(); ++i) {
      json jc;
      jc["component"] = f.components[i].name;
      jc["weight"] = w->weights[i];
      comps.push_back(std::move(jc));
    }
    o["weights"] = std::move(comps);
    o["common_degree"] = w->common_degree;
  }
  return o.dump();
}

std::string json_fibers(const Family& f, const std::string& stratum,
                        const std::map<VarId, Rational>& point, const FiberCount& fc) {
  json o;
  o["stratum"] = stratum;
  o["point"] = point_json(f.pool, point);
  json rows = json::array();
  for (const auto& r : fc.rows) {
    json jr;
    jr["component"] = r.component;
    jr["weight"] = r.weight;
    jr["dim"] = r.dim;
    jr["distinct"] = r.distinct;
    rows.push_back(std::move(jr));
  }
  o["rows"] = std::move(rows);
  o["with_multiplicity"] = fc.with_multiplicity;
  o["distinct"] = fc.distinct;
  return o.dump();
}

std::string json_pullback(const std::vector<PullbackResult>& rs) {
  json arr = json::array();
  for (const auto& r : rs) {
    json jr;
    jr["target"] = r.target;
    jr["degree"] = r.degree;
    json parts = json::array();
    for (const auto& p : r.parts) {
      json jp;
      jp["component"] = p.component;
      jp["multiplicity"] = p.multiplicity;
      jp["points"] = p.points;
      parts.push_back(std::move(jp));
    }
    jr["parts"] = std::move(parts);
    arr.push_back(std::move(jr));
  }
  json o;
  o["targets"] = std::move(arr);
  return o.dump();
}

std::string json_family(const Family& f) {
  json o;
  o["family"] = family_str(f);
  return o.dump();
}

std::string render_text(const std::string& op, const std::string& payload_json) {
  json o;
  try {
    o = json::parse(payload_json);
  } catch (const json::exception& e) {
    throw CtError(ErrCode::parse, std::string("bad payload: ") + e.what());
  }
  std::ostringstream out;
  auto point_line = [&](const json& pt) {
    bool first = true;
    for (auto it = pt.begin(); it != pt.end(); ++it) {
      out << (first ? "" : ", ") << it.key() << " = " << it.value().get<std::string>();
      first = false;
    }
  };
  if (op == "trace" || op == "residue") {
    out << o["value"].get<std::string>() << "\n";
  } else if (op == "degree") {
    out << o["degree"].get<int>() << "\n";
  } else if (op == "print") {
    out << o["family"].get<std::string>();
  } else if (op == "classify") {
    out << "degree: " << o["degree"].get<int>() << "\n";
    out << "newton spot-check: " << (o["newton_consistent"].get<bool>() ? "consistent" : "INCONSISTENT")
        << "\n";
    for (const auto& e : o["entries"]) {
      out << "  trace(" << e["monomial"].get<std::string>() << ") = " << e["trace"].get<std::string>()
          << "   [" << (e["regularity"]["regular"].get<bool>() ? "regular" : "not regular") << "]\n";
    }
  } else if (op == "check") {
    out << "verdict: " << o["verdict"].get<std::string>() << "\n";
    out << "degree: " << o["degree"].get<int>() << "\n";
    out << "bounds: monomials <= " << o["monomial_degree_bound"].get<int>() << ", forms <= "
        << o["form_degree_bound"].get<int>() << "\n";
    const auto& table = o["degree_table"];
    out << "degree table: " << (table["constant"].get<bool>() ? "constant" : "NOT CONSTANT") << " ("
        << table["cells"].size() << " cells)\n";
    if (!table["constant"].get<bool>())
      for (const auto& c : table["cells"])
        out << "  stratum " << c["stratum"].get<std::string>() << ", direction "
            << c["direction"].get<std::string>() << ": " << c["degree"].get<int>() << "\n";
    const auto& ws = o["witnesses"];
    out << "witnesses: " << ws.size() << "\n";
    for (const auto& w : ws) {
      out << "  " << w["source"].get<std::string>() << ": value " << w["value"].get<std::string>()
          << "; " << (w["regularity"]["regular"].get<bool>() ? "regular" : "not regular");
      if (w.contains("integrality")) {
        out << "; integral, monic degree " << w["integrality"]["degree"].get<int>() << " with coeffs [";
        bool first = true;
        for (const auto& c : w["integrality"]["coeffs"]) {
          out << (first ? "" : ", ") << c.get<std::string>();
          first = false;
        }
        out << "]";
      } else if (w["integrality_tested"].get<bool>()) {
        out << "; no integral relation found";
      }
      out << "\n";
    }
    if (o.contains("detail")) out << "detail: " << o["detail"].get<std::string>() << "\n";
  } else if (op == "weights") {
    if (!o["found"].get<bool>()) {
      out << "no admissible weights\n";
    } else {
      out << "weights:";
      for (const auto& c : o["weights"])
        out << " " << c["component"].get<std::string>() << "=" << c["weight"].get<int>();
      out << "   (common degree " << o["common_degree"].get<int>() << ")\n";
    }
  } else if (op == "fibers") {
    const json& list = o.contains("strata") ? o["strata"] : json::array({o});
    for (const auto& s : list) {
      out << "stratum " << s["stratum"].get<std::string>() << " at ";
      point_line(s["point"]);
      out << ": " << s["with_multiplicity"].get<std::size_t>() << " with multiplicity, "
          << s["distinct"].get<int>() << " distinct\n";
      for (const auto& r : s["rows"])
        out << "  component " << r["component"].get<std::string>() << " (weight "
            << r["weight"].get<int>() << "): dim " << r["dim"].get<std::size_t>() << ", distinct "
            << r["distinct"].get<int>() << "\n";
    }
  } else if (op == "pullback") {
    for (const auto& r : o["targets"]) {
      out << "target " << r["target"].get<std::string>() << ": degree " << r["degree"].get<int>()
          << "\n";
      for (const auto& p : r["parts"])
        out << "  component " << p["component"].get<std::string>() << ": " << p["points"].get<int>()
            << " point(s) of multiplicity " << p["multiplicity"].get<int>() << "\n";
    }
  } else {
    out << o.dump(2) << "\n";
  }
  return out.str();
}

std::string content_digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

}  // namespace ct
