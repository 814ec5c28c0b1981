/* cycletrace — exact trace morphisms and flatness certificates for weighted
 * families of branched coverings.  C interface of the shared library.
 *
 * Conventions:
 *   - Every operation returns a CT_* status code; 0 is success.
 *   - Output strings (*value, *json, *err) are heap-allocated by the library
 *     and must be released with ct_string_free().  They are only written on
 *     the corresponding outcome (outputs on success, *err on failure), and
 *     err may be NULL when the caller does not want a message.
 *   - JSON payloads follow the documented machine schema (see README) and
 *     are stable: identical input and seed produce byte-identical output.
 *   - seed == 0 and non-positive bounds/trials select the built-in defaults.
 */
#ifndef CYCLETRACE_H
#define CYCLETRACE_H

#ifdef __cplusplus
extern "C" {
#endif

#define CT_OK 0          /* success */
#define CT_EPARSE 1      /* malformed input text */
#define CT_ESEMANTIC 2   /* well-formed but inconsistent input */
#define CT_ENOT_FINITE 3 /* a fiber is not finite over the base */
#define CT_ERESOURCE 4   /* a configured resource cap was exceeded */
#define CT_EDEGENERATE 5 /* degenerate data (zero denominator, empty cover) */
#define CT_ELIFT 6       /* no base expression exists within the degree cap */
#define CT_EINVALID 7    /* invalid argument */
#define CT_EINTERNAL 8   /* unexpected internal failure */

typedef struct ct_family ct_family;

/* Library version, static storage. */
const char* ct_version(void);

/* Release a string returned through any char** output. */
void ct_string_free(char* s);

/* Parse a .fam document into a family handle. */
int ct_family_parse(const char* text, ct_family** out, char** err);
void ct_family_free(ct_family* f);

/* Canonical re-print of the parsed family ({"family": text} JSON). */
int ct_family_print(const ct_family* f, char** json, char** err);

/* Generic weighted covering degree. */
int ct_degree(const ct_family* f, int* out, char** err);

/* Trace of a polynomial in the fiber variables; canonical-string result. */
int ct_trace(const ct_family* f, const char* h, char** value, char** err);

/* Trace forced through one route; used to cross-check presentations. */
int ct_trace_parametric(const ct_family* f, const char* h, char** value, char** err);
int ct_trace_implicit(const ct_family* f, const char* h, char** value, char** err);

/* Relative trace of a differential form (e.g. "u dv - v du"). */
int ct_trace_form(const ct_family* f, const char* w, char** value, char** err);

/* Trace through the fundamental class (Grothendieck residue route);
 * requires one ideal generator per fiber variable on every component. */
int ct_trace_via_class(const ct_family* f, const char* h, char** value, char** err);

/* Classifying-map table: traces of all fiber monomials of degree 1..bound
 * (bound <= 0: the covering degree) with a regularity column. */
int ct_classify(const ct_family* f, int up_to_degree, unsigned long long seed, char** json,
                char** err);

/* Certify analytic geometric flatness.  Bounds <= 0 select defaults
 * (monomials: twice the degree; forms: the number of chart variables). */
int ct_check(const ct_family* f, int monomial_degree, int form_degree, unsigned long long seed,
             char** json, char** err);

/* Smallest weight vector making the weighted fiber cycles consistent. */
int ct_weights(const ct_family* f, int max_weight, unsigned long long seed, char** json,
               char** err);

/* Fiber cardinalities over declared strata (stratum == NULL: all). */
int ct_fibers(const ct_family* f, const char* stratum, int trials, unsigned long long seed,
              char** json, char** err);

/* Pull back the 0-cycle `coefficient * [stratum point]` through the family
 * (stratum == NULL: every declared stratum with coefficient 1). */
int ct_pullback(const ct_family* f, const char* stratum, int coefficient, int trials,
                unsigned long long seed, char** json, char** err);

/* Render an operation payload as human-readable text; op is one of
 * "trace", "form", "degree", "classify", "check", "weights", "fibers",
 * "residue", "pullback", "print". */
int ct_render_text(const char* op, const char* payload_json, char** text, char** err);

/* Exact equality of two rational-function expressions as elements of the
 * family's base field (i.e. modulo the base ideal); *out is 0 or 1. */
int ct_values_equal(const ct_family* f, const char* a, const char* b, int* out, char** err);

/* Coefficient-wise ring equality of two differential-form expressions. */
int ct_forms_equal(const ct_family* f, const char* a, const char* b, int* out, char** err);

/* FNV-1a 64-bit content digest as 16 hex digits; ties machine reports to
 * their input text. */
int ct_digest(const char* text, char** out, char** err);

#ifdef __cplusplus
}
#endif

#endif /* CYCLETRACE_H */
