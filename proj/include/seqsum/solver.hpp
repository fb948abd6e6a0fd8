#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqsum/bigseq.hpp"
#include "seqsum/certreal.hpp"
#include "seqsum/contfrac.hpp"
#include "seqsum/linforms.hpp"
#include "seqsum/reduction.hpp"

namespace seqsum {

using ordered_json = nlohmann::ordered_json;

// J_n + J_m = L_k  ("jj-l")  or  L_n + L_m = J_k  ("ll-j")
enum class EquationId { jj_l, ll_j };

const char* to_string(EquationId id);
EquationId equation_from_string(const std::string& text);
const BinaryRecurrence& summand_family(EquationId id);
const BinaryRecurrence& target_family(EquationId id);

struct SolutionTriple {
    unsigned long n = 0, m = 0, k = 0;
    auto operator<=>(const SolutionTriple&) const = default;
};

// Exactly the triples with 0 <= m <= n <= n_max and U_n + U_m = V_k for some
// k >= 0, sorted by (n, m, k); duplicated target values contribute every
// matching k.  Every emitted triple is re-verified exactly.
std::vector<SolutionTriple> enumerate_solutions(const BinaryRecurrence& U,
                                                const BinaryRecurrence& V,
                                                unsigned long n_max, unsigned jobs = 1);

// Reference oracle: plain triple loop over (n, m, k) with exact comparisons.
std::vector<SolutionTriple> enumerate_solutions_triple_loop(const BinaryRecurrence& U,
                                                            const BinaryRecurrence& V,
                                                            unsigned long n_max,
                                                            unsigned long k_max);

// Linear window on k in terms of n, derived from the growth envelopes with
// certified arithmetic and validated exhaustively against exact terms.
struct IndexRelation {
    EquationId equation;
    std::string window;            // "n < k < 2n" or "k < n"
    unsigned long valid_from_n;    // window certified for all n >= this
    mpq_class coeff_lo, coeff_hi;  // enclosure of the log ratio used
    mpfr_prec_t coeff_bits = 0;    // precision behind the enclosure
    std::vector<std::string> derivation;
    unsigned long validated_up_to;
};

IndexRelation index_relation(const BinaryRecurrence& U, const BinaryRecurrence& V,
                             EquationId direction);

// All (k, e) with term(rec, k) = 2^e <= 2^exponent_bound, sorted by (e, k).
std::vector<std::pair<unsigned long, unsigned long>>
power_of_two_targets(const BinaryRecurrence& rec, unsigned long exponent_bound);

struct CertifyConfig {
    unsigned long window = 200;
    std::optional<mpz_class> M;  // default: 3e29 for jj-l, 4e28 for ll-j
    mpfr_prec_t precision_bits = 192;
    mpfr_prec_t precision_ceiling = 4096;
    unsigned jobs = 1;
    // Convergent choices reproducing the published computation; any index
    // with q > 6M is sound.
    std::optional<std::size_t> reduction_index;  // default 75 / 70
    std::optional<std::size_t> sweep_index;      // default: same as reduction

    EscalationPolicy policy() const { return {precision_bits, precision_ceiling}; }
};

struct StageRecord {
    std::string name;
    std::string status;  // "success" or a failure description
    ordered_json inputs;
    ordered_json outputs;
    double ms = 0.0;
};

struct CertificationReport {
    std::string equation;
    unsigned long window = 0;
    std::vector<SolutionTriple> solutions;
    std::vector<StageRecord> stages;
    std::string verdict;  // "complete" | "incomplete"
    std::vector<std::pair<std::string, mpz_class>> ceilings;

    ordered_json to_json(bool with_timings = true) const;
    static CertificationReport from_json(const ordered_json& j);
    std::optional<mpz_class> ceiling(const std::string& name) const;
};

// End-to-end certification pipelines: search, index relation, the two
// lower-bound stages, global index bound, reduction, sweep, special branch
// (J+J=L only), verdict.
CertificationReport certify_jj_equals_l(const CertifyConfig& config = {});
CertificationReport certify_ll_equals_j(const CertifyConfig& config = {});
CertificationReport certify(EquationId id, const CertifyConfig& config = {});

struct CrossCheckResult {
    bool pass = false;
    std::vector<std::string> findings;
};

// Independent re-verification: every triple by exact arithmetic, solution set
// against a naive double-loop re-search, final ceiling within the window, and
// verdict consistency.
CrossCheckResult cross_check(const CertificationReport& report);

}  // namespace seqsum
