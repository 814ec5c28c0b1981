#include "../include/cycletrace.h"

#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <string>

#include "covering.hpp"
#include "errors.hpp"
#include "famfile.hpp"
#include "flatness.hpp"
#include "forms.hpp"
#include "fundclass.hpp"
#include "report.hpp"

struct ct_family {
  std::unique_ptr<ct::Family> fam;
};

namespace {

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void set_err(char** err, const std::string& msg) {
  if (err) *err = dup_string(msg);
}

template <typename F>
int guard(char** err, F&& fn) {
  try {
    fn();
    return CT_OK;
  } catch (const ct::CtError& e) {
    set_err(err, e.what());
    return static_cast<int>(e.code);
  } catch (const std::exception& e) {
    set_err(err, e.what());
    return CT_EINTERNAL;
  }
}

const ct::Family& deref(const ct_family* f) {
  if (!f || !f->fam) throw ct::CtError(ct::ErrCode::invalid_arg, "null family handle");
  return *f->fam;
}

ct::Poly parse_poly_arg(const ct::Family& f, const char* text) {
  if (!text) throw ct::CtError(ct::ErrCode::invalid_arg, "null polynomial argument");
  ct::ParseError perr;
  auto p = ct::poly_parse(text, f.pool, &perr);
  if (!p) throw ct::CtError(ct::ErrCode::parse, "in '" + std::string(text) + "': " + perr.message);
  return *p;
}

std::uint64_t pick_seed(unsigned long long seed) { return seed == 0 ? 1 : seed; }

const ct::Stratum& find_stratum(const ct::Family& f, const char* name) {
  for (const auto& st : f.strata)
    if (st.name == name) return st;
  throw ct::CtError(ct::ErrCode::invalid_arg, "unknown stratum '" + std::string(name) + "'");
}

}  // namespace

extern "C" {

const char* ct_version(void) { return "0.1.0"; }

void ct_string_free(char* s) { std::free(s); }

int ct_family_parse(const char* text, ct_family** out, char** err) {
  return guard(err, [&] {
    if (!text || !out) throw ct::CtError(ct::ErrCode::invalid_arg, "null argument");
    auto fam = ct::family_parse(text);
    *out = new ct_family{std::move(fam)};
  });
}

void ct_family_free(ct_family* f) { delete f; }

int ct_family_print(const ct_family* f, char** json, char** err) {
  return guard(err, [&] { *json = dup_string(ct::json_family(deref(f))); });
}

int ct_degree(const ct_family* f, int* out, char** err) {
  return guard(err, [&] { *out = ct::degree_generic(deref(f)); });
}

int ct_trace(const ct_family* f, const char* h, char** value, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    *value = dup_string(ct::json_value(fam, ct::trace0(fam, parse_poly_arg(fam, h))));
  });
}

int ct_trace_parametric(const ct_family* f, const char* h, char** value, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    *value = dup_string(ct::json_value(fam, ct::trace0_parametric(fam, parse_poly_arg(fam, h))));
  });
}

int ct_trace_implicit(const ct_family* f, const char* h, char** value, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    *value = dup_string(ct::json_value(fam, ct::trace0_implicit(fam, parse_poly_arg(fam, h))));
  });
}

int ct_trace_form(const ct_family* f, const char* w, char** value, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    if (!w) throw ct::CtError(ct::ErrCode::invalid_arg, "null form argument");
    ct::ParseError perr;
    auto form = ct::form_parse(w, fam.pool, &perr);
    if (!form)
      throw ct::CtError(ct::ErrCode::parse, "in '" + std::string(w) + "': " + perr.message);
    *value = dup_string(ct::json_form(fam, ct::trace_form(fam, *form)));
  });
}

int ct_trace_via_class(const ct_family* f, const char* h, char** value, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    *value = dup_string(ct::json_value(fam, ct::trace_via_class(fam, parse_poly_arg(fam, h))));
  });
}

int ct_classify(const ct_family* f, int up_to_degree, unsigned long long seed, char** json,
                char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    int bound = up_to_degree > 0 ? up_to_degree : ct::degree_generic(fam);
    *json = dup_string(ct::json_classify(fam, ct::classifying_map(fam, bound, pick_seed(seed))));
  });
}

int ct_check(const ct_family* f, int monomial_degree, int form_degree, unsigned long long seed,
             char** json, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    ct::CertifyOptions opts;
    if (monomial_degree > 0) opts.monomial_degree_bound = monomial_degree;
    if (form_degree > 0) opts.form_degree_bound = form_degree;
    opts.seed = pick_seed(seed);
    *json = dup_string(ct::json_check(fam, ct::certify_agf(fam, opts)));
  });
}

int ct_weights(const ct_family* f, int max_weight, unsigned long long seed, char** json,
               char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    int mw = max_weight > 0 ? max_weight : 6;
    *json = dup_string(ct::json_weights(fam, ct::weight_search(fam, mw, pick_seed(seed))));
  });
}

int ct_fibers(const ct_family* f, const char* stratum, int trials, unsigned long long seed,
              char** json, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    int tr = trials > 0 ? trials : 4;
    nlohmann::json strata = nlohmann::json::array();
    auto one = [&](const ct::Stratum& st) {
      ct::FiberCount fc = ct::fiber_count(fam, st.point, tr, pick_seed(seed));
      strata.push_back(nlohmann::json::parse(ct::json_fibers(fam, st.name, st.point, fc)));
    };
    if (stratum) {
      one(find_stratum(fam, stratum));
    } else {
      if (fam.strata.empty())
        throw ct::CtError(ct::ErrCode::invalid_arg, "family declares no strata");
      for (const auto& st : fam.strata) one(st);
    }
    nlohmann::json o;
    o["strata"] = std::move(strata);
    *json = dup_string(o.dump());
  });
}

int ct_pullback(const ct_family* f, const char* stratum, int coefficient, int trials,
                unsigned long long seed, char** json, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    int tr = trials > 0 ? trials : 4;
    int coeff = coefficient != 0 ? coefficient : 1;
    std::vector<ct::PullbackTarget> targets;
    if (stratum) {
      const ct::Stratum& st = find_stratum(fam, stratum);
      targets.push_back(ct::PullbackTarget{st.name, coeff, st.point});
    } else {
      if (fam.strata.empty())
        throw ct::CtError(ct::ErrCode::invalid_arg, "family declares no strata");
      for (const auto& st : fam.strata)
        targets.push_back(ct::PullbackTarget{st.name, coeff, st.point});
    }
    *json = dup_string(ct::json_pullback(ct::cycle_pullback(fam, targets, tr, pick_seed(seed))));
  });
}

int ct_render_text(const char* op, const char* payload_json, char** text, char** err) {
  return guard(err, [&] {
    if (!op || !payload_json) throw ct::CtError(ct::ErrCode::invalid_arg, "null argument");
    *text = dup_string(ct::render_text(op, payload_json));
  });
}

int ct_values_equal(const ct_family* f, const char* a, const char* b, int* out, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    if (!a || !b || !out) throw ct::CtError(ct::ErrCode::invalid_arg, "null argument");
    auto parse = [&](const char* text) {
      ct::ParseError perr;
      auto v = ct::ratfunc_parse(text, fam.pool, &perr);
      if (!v)
        throw ct::CtError(ct::ErrCode::parse, "in '" + std::string(text) + "': " + perr.message);
      return *v;
    };
    const ct::BaseRing& R = fam.base_ring();
    *out = R.is_zero(R.sub(parse(a), parse(b))) ? 1 : 0;
  });
}

int ct_forms_equal(const ct_family* f, const char* a, const char* b, int* out, char** err) {
  return guard(err, [&] {
    const ct::Family& fam = deref(f);
    if (!a || !b || !out) throw ct::CtError(ct::ErrCode::invalid_arg, "null argument");
    auto parse = [&](const char* text) {
      ct::ParseError perr;
      auto w = ct::form_parse(text, fam.pool, &perr);
      if (!w)
        throw ct::CtError(ct::ErrCode::parse, "in '" + std::string(text) + "': " + perr.message);
      return *w;
    };
    ct::RelativeForm diff = parse(a) - parse(b);
    const ct::BaseRing& R = fam.base_ring();
    bool zero = true;
    for (const auto& [key, coeff] : diff.terms)
      if (!R.is_zero(coeff)) zero = false;
    *out = zero ? 1 : 0;
  });
}

int ct_digest(const char* text, char** out, char** err) {
  return guard(err, [&] {
    if (!text || !out) throw ct::CtError(ct::ErrCode::invalid_arg, "null argument");
    *out = dup_string(ct::content_digest(text));
  });
}

}  // extern "C"
