/*!
  \file infoflow.hpp
  \brief Exact entropies and mutual information over the hypercube

  Probabilities over a domain D are kept as integer counts and turned into
  floating point only inside logarithms.  Quantities involving a composition
  treat X as uniform on D.
*/

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "composition.hpp"
#include "domain.hpp"

namespace comploc
{

inline constexpr double info_tolerance = 1e-9;
inline constexpr unsigned info_max_vars = 20u;

/*! \brief Finite distribution; weights nonnegative and summing to 1 within 1e-12 */
class discrete_distribution
{
public:
  explicit discrete_distribution( std::vector<double> weights );
  static discrete_distribution uniform( std::size_t outcomes );

  std::span<const double> weights() const noexcept { return weights_; }

private:
  std::vector<double> weights_;
};

/*! \brief Joint distribution of (X, Y) as a row-major |X| x |Y| matrix */
class joint_distribution
{
public:
  joint_distribution( std::size_t x_outcomes, std::size_t y_outcomes, std::vector<double> weights );

  std::size_t x_outcomes() const noexcept { return rows_; }
  std::size_t y_outcomes() const noexcept { return cols_; }
  double operator()( std::size_t x, std::size_t y ) const noexcept { return weights_[x * cols_ + y]; }

  discrete_distribution marginal_x() const;
  discrete_distribution marginal_y() const;
  joint_distribution transposed() const;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> weights_;
};

double entropy( discrete_distribution const& d );
/*! \brief H[X | Y] */
double conditional_entropy( joint_distribution const& j );
/*! \brief I[X : Y] = H[X] - H[X | Y] */
double mutual_information( joint_distribution const& j );
double binary_entropy( double p );

/*! \brief Entropy of the empirical distribution given by counts */
double entropy_from_counts( std::span<const std::uint64_t> counts );

struct variable_info
{
  unsigned var = 0u;
  unsigned q = 0u;
  double information = 0.0;         ///< I[X_i : g(X)]
  double conditional_entropy = 0.0; ///< H[X_i | g(X)]
  double marginal_entropy = 0.0;    ///< H[X_i]
  std::uint64_t escape_count = 0u;  ///< #{x in D : x^{+i} not in D}
  double escape = 0.0;              ///< Pr[X^{+i} not in D]
};

struct info_report
{
  unsigned n = 0u;
  unsigned m = 0u;
  std::uint64_t domain_size = 0u;
  std::uint64_t fibers = 0u;      ///< distinct inner-output vectors seen on D
  double input_entropy = 0.0;     ///< H[X] = log2 |D|
  double total_information = 0.0; ///< I[X : g(X)] = H[g(X)]
  std::vector<variable_info> vars;

  double information_sum() const noexcept;
};

/*! \brief Exact per-variable quantities for X uniform on D (n <= 20) */
info_report compute_info_report( composition const& c, domain const& d );

struct key_lemma_entry
{
  unsigned var = 0u;
  unsigned q = 0u;
  double conditional_entropy = 0.0;
  double escape = 0.0;
  double gap = 0.0;           ///< 1 + escape - H[X_i | g(X)]
  bool nonnegative = false;   ///< gap >= 0
  bool strict = true;         ///< when escape = 0: gap > 0
  bool unqueried_escapes = true; ///< when q = 0: escape = 1
};

struct key_lemma_report
{
  std::vector<key_lemma_entry> entries;
  bool every_variable_queried = true;
  bool pass = true;
};

/*! \brief Per-variable checks of the conditional-entropy bound

  Requires that c agrees with `target` on D and that target(x) = |x| there;
  throws precondition_error otherwise.
*/
key_lemma_report check_key_lemma( composition const& c, truth_table const& target, domain const& d );

/*! \brief Every nonempty subset of [n] with at most max_size elements, each ascending */
std::vector<std::vector<unsigned>> subsets_up_to( unsigned n, unsigned max_size );

struct counting_bound_report
{
  bool pass = true;
  std::uint64_t checked = 0u;
  std::optional<std::vector<unsigned>> failing_subset;
  unsigned failing_count = 0u;
};

/*! \brief For each S, the number of inners touching S must be at least log2(|S|+1)

  c must compute HW_n on the full cube.
*/
counting_bound_report check_counting_bound( composition const& c, std::vector<std::vector<unsigned>> const& subsets );

/*! \brief Statistics of one class S_v (inputs agreeing with v on the inners not reading i) */
struct bias_candidate
{
  output_key v;                        ///< outputs of the inners not reading i, in inner order
  std::uint64_t class_size = 0u;       ///< |D cap S_v|
  unsigned weight_count = 0u;          ///< |W_v|
  std::vector<std::uint64_t> pair_counts; ///< index w: #{x : x^{+i} in D, |x^{(i->0)}| = w}
  unsigned w_star = 0u;                ///< weight in W_v of the largest upward jump of pair_counts
  std::uint64_t at_w_star = 0u;        ///< #{x in D cap S_v : |x| = w*}
  std::uint64_t ones_at_w_star = 0u;   ///< those with x_i = 1

  double mass() const noexcept { return class_size ? double( at_w_star ) / double( class_size ) : 0.0; }
  double p_cond() const noexcept { return at_w_star ? double( ones_at_w_star ) / double( at_w_star ) : 0.5; }
};

struct bias_witness
{
  unsigned var = 0u;
  unsigned q = 0u;
  output_key v;
  unsigned w_star = 0u;
  double p_cond = 0.0; ///< Pr[X_i = 1 | X in S_v, |X| = w*]
  double mass = 0.0;   ///< Pr[|X| = w* | X in S_v]
  unsigned weight_count = 0u;
};

/*! \brief Every reachable v for variable i, in lexicographic order of v */
std::vector<bias_candidate> enumerate_bias_candidates( composition const& c, domain const& d, unsigned i );

/*! \brief The candidate maximizing |p_cond - 1/2| * mass, ties to least (v, w*)

  Requires c(x) = |x| on D and q_i >= 1 (precondition_error otherwise).
*/
bias_witness extract_bias_witness( composition const& c, domain const& d, unsigned i );

struct facts_report
{
  unsigned trials = 0u;
  std::uint64_t checks = 0u;
  std::uint64_t failures = 0u;
  std::vector<std::string> messages; ///< first few failures

  bool pass() const noexcept { return failures == 0u; }
};

/*! \brief Checks the elementary entropy facts on seeded random distributions */
facts_report validate_information_facts( unsigned trials, std::uint64_t seed );

} // namespace comploc
