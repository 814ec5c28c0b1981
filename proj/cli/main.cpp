// cycletrace command-line front end. Talks to the core library exclusively
// through the C interface in cycletrace.h.
#include <CLI11.hpp>
#include <cycletrace.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

// --- C-API helpers -----------------------------------------------------------

struct CStr {
  char* p = nullptr;
  ~CStr() { ct_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct FamilyHandle {
  ct_family* f = nullptr;
  ~FamilyHandle() { ct_family_free(f); }
};

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(kExitError);
}

void check_rc(int rc, const CStr& err) {
  if (rc != CT_OK) die(err.p ? err.str() : "operation failed (code " + std::to_string(rc) + ")");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) die("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --- shared options ------------------------------------------------------------

struct Options {
  std::string family_path;
  std::string format = "text";
  std::string out_path;
  unsigned long long seed = 0;
  int monomial_degree = 0;
  int form_degree = 0;
  int max_weight = 0;
  int trials = 0;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("family", o.family_path, "family description file (.fam)")->required();
  cmd->add_option("--format", o.format, "stdout format: text or machine")
      ->check(CLI::IsMember({"text", "machine"}));
  cmd->add_option("--out", o.out_path, "also write the machine report to this file");
  cmd->add_option("--seed", o.seed, "random seed for sampled checks (default 1)");
}

struct Loaded {
  std::string text;
  FamilyHandle fam;
};

Loaded load_family(const std::string& path) {
  Loaded l;
  l.text = read_file(path);
  CStr err;
  int rc = ct_family_parse(l.text.c_str(), &l.fam.f, &err.p);
  if (rc != CT_OK) die(path + ": " + err.str());
  return l;
}

// Assemble the report envelope, emit per --format, append the machine line to
// --out when given, and return the parsed payload.
json emit(const Options& o, const Loaded& l, const std::string& op, const json& args,
          const std::string& payload) {
  CStr digest, derr;
  check_rc(ct_digest(l.text.c_str(), &digest.p, &derr.p), derr);
  json envelope;
  envelope["op"] = op;
  envelope["input"] = o.family_path;
  envelope["input_digest"] = digest.str();
  envelope["seed"] = o.seed == 0 ? 1 : o.seed;
  envelope["args"] = args;
  json pay = json::parse(payload);
  envelope["result"] = pay;
  if (o.format == "machine") {
    std::cout << envelope.dump() << "\n";
  } else {
    CStr text, terr;
    check_rc(ct_render_text(op.c_str(), payload.c_str(), &text.p, &terr.p), terr);
    std::cout << text.str();
  }
  if (!o.out_path.empty()) {
    std::ofstream out(o.out_path, std::ios::app);
    if (!out) die("cannot write '" + o.out_path + "'");
    out << envelope.dump() << "\n";
  }
  return pay;
}

// --- subcommand bodies ---------------------------------------------------------

int run_trace(const Options& o, const std::string& function, const std::string& form,
              const std::string& route) {
  if (function.empty() == form.empty())
    die("trace needs exactly one of --function or --form");
  Loaded l = load_family(o.family_path);
  CStr value, err;
  if (!form.empty()) {
    if (route != "auto") die("--route applies only to --function traces");
    check_rc(ct_trace_form(l.fam.f, form.c_str(), &value.p, &err.p), err);
    emit(o, l, "form", {{"form", form}}, value.str());
    return kExitOk;
  }
  int rc;
  if (route == "parametric")
    rc = ct_trace_parametric(l.fam.f, function.c_str(), &value.p, &err.p);
  else if (route == "implicit")
    rc = ct_trace_implicit(l.fam.f, function.c_str(), &value.p, &err.p);
  else if (route == "class")
    rc = ct_trace_via_class(l.fam.f, function.c_str(), &value.p, &err.p);
  else
    rc = ct_trace(l.fam.f, function.c_str(), &value.p, &err.p);
  check_rc(rc, err);
  emit(o, l, "trace", {{"function", function}, {"route", route}}, value.str());
  return kExitOk;
}

int run_classify(const Options& o) {
  Loaded l = load_family(o.family_path);
  CStr payload, err;
  check_rc(ct_classify(l.fam.f, o.monomial_degree, o.seed, &payload.p, &err.p), err);
  json pay = emit(o, l, "classify", {{"monomial_degree", o.monomial_degree}}, payload.str());
  return pay["newton_consistent"].get<bool>() ? kExitOk : kExitNegative;
}

int run_check(const Options& o) {
  Loaded l = load_family(o.family_path);
  CStr payload, err;
  check_rc(ct_check(l.fam.f, o.monomial_degree, o.form_degree, o.seed, &payload.p, &err.p), err);
  json pay = emit(o, l, "check",
                  {{"monomial_degree", o.monomial_degree}, {"form_degree", o.form_degree}},
                  payload.str());
  std::string verdict = pay["verdict"].get<std::string>();
  if (verdict == "AGF_certified") return kExitOk;
  if (verdict == "Undetermined") return kExitError;
  return kExitNegative;
}

int run_weights(const Options& o) {
  Loaded l = load_family(o.family_path);
  CStr payload, err;
  check_rc(ct_weights(l.fam.f, o.max_weight, o.seed, &payload.p, &err.p), err);
  json pay = emit(o, l, "weights", {{"max_weight", o.max_weight}}, payload.str());
  return pay["found"].get<bool>() ? kExitOk : kExitNegative;
}

int run_fibers(const Options& o, const std::string& stratum) {
  Loaded l = load_family(o.family_path);
  CStr payload, err;
  check_rc(ct_fibers(l.fam.f, stratum.empty() ? nullptr : stratum.c_str(), o.trials, o.seed,
                     &payload.p, &err.p),
           err);
  emit(o, l, "fibers", {{"stratum", stratum}, {"trials", o.trials}}, payload.str());
  return kExitOk;
}

int run_residue(const Options& o, const std::string& function) {
  Loaded l = load_family(o.family_path);
  CStr value, err;
  check_rc(ct_trace_via_class(l.fam.f, function.c_str(), &value.p, &err.p), err);
  emit(o, l, "residue", {{"function", function}}, value.str());
  return kExitOk;
}

int run_pullback(const Options& o, const std::string& stratum, int coefficient) {
  Loaded l = load_family(o.family_path);
  CStr payload, err;
  check_rc(ct_pullback(l.fam.f, stratum.empty() ? nullptr : stratum.c_str(), coefficient,
                       o.trials, o.seed, &payload.p, &err.p),
           err);
  emit(o, l, "pullback", {{"stratum", stratum}, {"coefficient", coefficient}}, payload.str());
  return kExitOk;
}

int run_print(const Options& o) {
  Loaded l = load_family(o.family_path);
  CStr payload, err;
  check_rc(ct_family_print(l.fam.f, &payload.p, &err.p), err);
  emit(o, l, "print", json::object(), payload.str());
  return kExitOk;
}

// --- corpus runner ---------------------------------------------------------------

struct ExpectLine {
  std::string key, arg, expected;
  std::size_t lineno = 0;
};

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<ExpectLine> parse_expect(const std::string& text, const std::string& path) {
  std::vector<ExpectLine> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      die(path + ":" + std::to_string(lineno) + ": expected 'key [arg] = value'");
    std::string head = strip(line.substr(0, eq));
    std::string expected = strip(line.substr(eq + 1));
    std::size_t sp = head.find_first_of(" \t");
    ExpectLine e;
    e.key = sp == std::string::npos ? head : head.substr(0, sp);
    e.arg = sp == std::string::npos ? "" : strip(head.substr(sp + 1));
    e.expected = expected;
    e.lineno = lineno;
    out.push_back(std::move(e));
  }
  return out;
}

bool values_equal(ct_family* f, const std::string& a, const std::string& b, std::string* why) {
  CStr err;
  int same = 0;
  int rc = ct_values_equal(f, a.c_str(), b.c_str(), &same, &err.p);
  if (rc != CT_OK) {
    *why = err.str();
    return false;
  }
  if (!same) *why = "got " + a + ", expected " + b;
  return same != 0;
}

// One expectation; returns true on pass, else fills `why`.
bool run_expect(ct_family* fam, unsigned long long seed, const ExpectLine& e, std::string* why) {
  CStr out, err;
  auto fail_rc = [&](int rc) {
    if (rc != CT_OK) {
      *why = err.str();
      return true;
    }
    return false;
  };
  if (e.key == "degree") {
    int deg = 0;
    if (fail_rc(ct_degree(fam, &deg, &err.p))) return false;
    if (std::to_string(deg) != e.expected) {
      *why = "got " + std::to_string(deg) + ", expected " + e.expected;
      return false;
    }
    return true;
  }
  if (e.key == "trace" || e.key == "trace_parametric" || e.key == "trace_implicit" ||
      e.key == "residue") {
    int rc;
    if (e.key == "trace_parametric")
      rc = ct_trace_parametric(fam, e.arg.c_str(), &out.p, &err.p);
    else if (e.key == "trace_implicit")
      rc = ct_trace_implicit(fam, e.arg.c_str(), &out.p, &err.p);
    else if (e.key == "residue")
      rc = ct_trace_via_class(fam, e.arg.c_str(), &out.p, &err.p);
    else
      rc = ct_trace(fam, e.arg.c_str(), &out.p, &err.p);
    if (fail_rc(rc)) return false;
    std::string got = json::parse(out.str())["value"].get<std::string>();
    return values_equal(fam, got, e.expected, why);
  }
  if (e.key == "form") {
    if (fail_rc(ct_trace_form(fam, e.arg.c_str(), &out.p, &err.p))) return false;
    std::string got = json::parse(out.str())["value"].get<std::string>();
    CStr ferr;
    int same = 0;
    int rc = ct_forms_equal(fam, got.c_str(), e.expected.c_str(), &same, &ferr.p);
    if (rc != CT_OK) {
      *why = ferr.str();
      return false;
    }
    if (!same) *why = "got " + got + ", expected " + e.expected;
    return same != 0;
  }
  if (e.key == "check") {
    if (fail_rc(ct_check(fam, 0, 0, seed, &out.p, &err.p))) return false;
    std::string verdict = json::parse(out.str())["verdict"].get<std::string>();
    if (verdict != e.expected) {
      *why = "got " + verdict + ", expected " + e.expected;
      return false;
    }
    return true;
  }
  if (e.key == "witness_square") {
    // arg: witness value; expected: rhs of the monic relation sigma^2 = rhs.
    if (fail_rc(ct_check(fam, 0, 0, seed, &out.p, &err.p))) return false;
    json pay = json::parse(out.str());
    for (const auto& w : pay["witnesses"]) {
      std::string val = w["value"].get<std::string>();
      std::string scratch;
      if (!values_equal(fam, val, e.arg, &scratch)) continue;
      if (!w.contains("integrality")) {
        *why = "witness " + e.arg + " has no integral relation";
        return false;
      }
      const json& rel = w["integrality"];
      if (rel["degree"].get<int>() != 2) {
        *why = "witness " + e.arg + " relation degree " + rel["degree"].dump() + ", expected 2";
        return false;
      }
      std::string a0 = rel["coeffs"][0].get<std::string>();
      std::string a1 = rel["coeffs"][1].get<std::string>();
      if (!values_equal(fam, a1, "0", why)) {
        *why = "witness " + e.arg + " has a linear term: " + a1;
        return false;
      }
      return values_equal(fam, "-(" + a0 + ")", e.expected, why);
    }
    *why = "no witness matches " + e.arg;
    return false;
  }
  if (e.key == "weights") {
    if (fail_rc(ct_weights(fam, 0, seed, &out.p, &err.p))) return false;
    json pay = json::parse(out.str());
    if (e.expected == "absent") {
      if (pay["found"].get<bool>()) {
        *why = "weights found, expected absent";
        return false;
      }
      return true;
    }
    if (!pay["found"].get<bool>()) {
      *why = "no weights found, expected " + e.expected;
      return false;
    }
    // expected: "name:w name:w ... degree D"
    std::ostringstream got;
    for (const auto& c : pay["weights"])
      got << c["component"].get<std::string>() << ":" << c["weight"].get<int>() << " ";
    got << "degree " << pay["common_degree"].get<int>();
    if (got.str() != e.expected) {
      *why = "got '" + got.str() + "', expected '" + e.expected + "'";
      return false;
    }
    return true;
  }
  if (e.key == "fibers" || e.key == "fibers_mult") {
    if (fail_rc(ct_fibers(fam, e.arg.c_str(), 0, seed, &out.p, &err.p))) return false;
    const json s = json::parse(out.str())["strata"][0];
    long long got = e.key == "fibers" ? s["distinct"].get<long long>()
                                      : s["with_multiplicity"].get<long long>();
    if (std::to_string(got) != e.expected) {
      *why = "got " + std::to_string(got) + ", expected " + e.expected;
      return false;
    }
    return true;
  }
  if (e.key == "pullback" || e.key == "pullback_parts") {
    if (fail_rc(ct_pullback(fam, e.arg.c_str(), 1, 0, seed, &out.p, &err.p))) return false;
    const json t = json::parse(out.str())["targets"][0];
    if (e.key == "pullback") {
      int got = t["degree"].get<int>();
      if (std::to_string(got) != e.expected) {
        *why = "got " + std::to_string(got) + ", expected " + e.expected;
        return false;
      }
      return true;
    }
    // parts formatted "MULTxPOINTS", sorted, space-separated
    std::vector<std::pair<int, int>> parts;
    for (const auto& p : t["parts"])
      parts.emplace_back(p["multiplicity"].get<int>(), p["points"].get<int>());
    std::sort(parts.begin(), parts.end());
    std::ostringstream got;
    for (std::size_t i = 0; i < parts.size(); ++i)
      got << (i ? " " : "") << parts[i].first << "x" << parts[i].second;
    if (got.str() != e.expected) {
      *why = "got '" + got.str() + "', expected '" + e.expected + "'";
      return false;
    }
    return true;
  }
  *why = "unknown expectation key '" + e.key + "'";
  return false;
}

int run_corpus(const std::string& dir, unsigned long long seed) {
  namespace fs = std::filesystem;
  std::vector<fs::path> items;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.path().extension() == ".fam") items.push_back(entry.path());
  if (ec) die("cannot read corpus directory '" + dir + "'");
  if (items.empty()) die("no .fam files in '" + dir + "'");
  std::sort(items.begin(), items.end());

  int failures = 0;
  for (const auto& fam_path : items) {
    fs::path expect_path = fam_path;
    expect_path.replace_extension(".expect");
    std::string name = fam_path.stem().string();
    if (!fs::exists(expect_path)) {
      std::cout << "SKIP " << name << " (no expectations)\n";
      continue;
    }
    std::string fam_text = read_file(fam_path.string());
    CStr perr;
    FamilyHandle fam;
    if (ct_family_parse(fam_text.c_str(), &fam.f, &perr.p) != CT_OK) {
      std::cout << "FAIL " << name << ": " << perr.str() << "\n";
      ++failures;
      continue;
    }
    auto expects = parse_expect(read_file(expect_path.string()), expect_path.string());
    int passed = 0;
    std::ostringstream buf;
    for (const auto& e : expects) {
      std::string why;
      if (run_expect(fam.f, seed, e, &why)) {
        ++passed;
      } else {
        buf << "  " << expect_path.filename().string() << ":" << e.lineno << ": " << e.key
            << (e.arg.empty() ? "" : " " + e.arg) << ": " << why << "\n";
      }
    }
    if (passed == static_cast<int>(expects.size())) {
      std::cout << "PASS " << name << " (" << passed << " checks)\n";
    } else {
      std::cout << "FAIL " << name << " (" << passed << "/" << expects.size() << " checks)\n"
                << buf.str();
      ++failures;
    }
  }
  return failures == 0 ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact trace morphisms and flatness certificates for weighted "
               "families of branched coverings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ct_version()));

  Options topt;
  std::string t_function, t_form, t_route = "auto";
  auto* trace = app.add_subcommand("trace", "trace a fiber polynomial or differential form");
  add_common(trace, topt);
  trace->add_option("--function", t_function, "polynomial in the fiber variables");
  trace->add_option("--form", t_form, "differential form, e.g. \"u dv - v du\"");
  trace->add_option("--route", t_route, "trace route: auto, parametric, implicit, class")
      ->check(CLI::IsMember({"auto", "parametric", "implicit", "class"}));

  Options copt;
  auto* classify = app.add_subcommand("classify", "classifying-map table with regularity column");
  add_common(classify, copt);
  classify->add_option("--monomial-degree", copt.monomial_degree,
                       "trace monomials up to this degree (default: covering degree)");

  Options kopt;
  auto* check = app.add_subcommand("check", "certify analytic geometric flatness");
  add_common(check, kopt);
  check->add_option("--monomial-degree", kopt.monomial_degree,
                    "monomial trace bound (default: twice the covering degree)");
  check->add_option("--form-degree", kopt.form_degree,
                    "form trace bound (default: number of chart variables)");

  Options wopt;
  auto* weights = app.add_subcommand("weights", "search admissible component weights");
  add_common(weights, wopt);
  weights->add_option("--max-weight", wopt.max_weight, "per-component bound (default 6)");

  Options fopt;
  std::string f_stratum;
  auto* fibers = app.add_subcommand("fibers", "fiber cardinalities over declared strata");
  add_common(fibers, fopt);
  fibers->add_option("--stratum", f_stratum, "restrict to one stratum");
  fibers->add_option("--trials", fopt.trials, "sampling trials (default 4)");

  Options ropt;
  std::string r_function;
  auto* residue =
      app.add_subcommand("residue", "trace through the fundamental class (residue route)");
  add_common(residue, ropt);
  residue->add_option("--function", r_function, "polynomial in the fiber variables")->required();

  Options popt;
  std::string p_stratum;
  int p_coefficient = 1;
  auto* pullback = app.add_subcommand("pullback", "pull back a 0-cycle on the base");
  add_common(pullback, popt);
  pullback->add_option("--stratum", p_stratum, "target stratum (default: all)");
  pullback->add_option("--coefficient", p_coefficient, "cycle coefficient (default 1)");
  pullback->add_option("--trials", popt.trials, "sampling trials (default 4)");

  Options pr_opt;
  auto* print = app.add_subcommand("print", "parse and canonically re-print a family");
  add_common(print, pr_opt);

  std::string corpus_dir = CYCLETRACE_CORPUS_DIR;
  unsigned long long corpus_seed = 0;
  auto* corpus = app.add_subcommand("corpus", "run the bundled examples against expectations");
  corpus->add_option("--dir", corpus_dir, "corpus directory");
  corpus->add_option("--seed", corpus_seed, "random seed (default 1)");

  CLI11_PARSE(app, argc, argv);

  if (trace->parsed()) return run_trace(topt, t_function, t_form, t_route);
  if (classify->parsed()) return run_classify(copt);
  if (check->parsed()) return run_check(kopt);
  if (weights->parsed()) return run_weights(wopt);
  if (fibers->parsed()) return run_fibers(fopt, f_stratum);
  if (residue->parsed()) return run_residue(ropt, r_function);
  if (pullback->parsed()) return run_pullback(popt, p_stratum, p_coefficient);
  if (print->parsed()) return run_print(pr_opt);
  if (corpus->parsed()) return run_corpus(corpus_dir, corpus_seed);
  return kExitError;
}
