#pragma once

// Registry of the scalar bound families: names, selectors, hypothesis
// windows, and one dispatch entry point used by the suites and the CLI.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meanbound/refinement.hpp"
#include "meanbound/scalar_bounds.hpp"

namespace meanbound {

enum class ScalarFamily {
  reverse_young_basic,
  corollary_one_term,
  theorem_main_reverse,
  lemma_sm_reverse,
  kittaneh_manasrah,
  zhao_wu_forward,
  zhao_wu_reverse,
  sababheh_choi_forward,
  theorem_extended_sc,
  heinz_reverse_main,
  heinz_reverse_sc,
};

struct ScalarFamilyInfo {
  ScalarFamily family;
  std::string_view name;
  bool has_branch;  ///< takes i / ii
  bool has_form;    ///< takes lemma / proposition
  int min_depth;    ///< 0 when the family takes no depth
};

inline constexpr std::array<ScalarFamilyInfo, 11> kScalarFamilies{{
    {ScalarFamily::reverse_young_basic, "reverse-young-basic", false, false, 0},
    {ScalarFamily::corollary_one_term, "corollary-one-term", true, false, 0},
    {ScalarFamily::theorem_main_reverse, "theorem-main-reverse", true, false, 1},
    {ScalarFamily::lemma_sm_reverse, "lemma-sm-reverse", true, false, 1},
    {ScalarFamily::kittaneh_manasrah, "kittaneh-manasrah", false, false, 0},
    {ScalarFamily::zhao_wu_forward, "zhao-wu-forward", false, false, 0},
    {ScalarFamily::zhao_wu_reverse, "zhao-wu-reverse", false, true, 0},
    {ScalarFamily::sababheh_choi_forward, "sababheh-choi-forward", false, false, 1},
    {ScalarFamily::theorem_extended_sc, "theorem-extended-sc", true, false, 1},
    {ScalarFamily::heinz_reverse_main, "heinz-reverse-main", true, false, 2},
    {ScalarFamily::heinz_reverse_sc, "heinz-reverse-sc", true, false, 1},
}};

inline const ScalarFamilyInfo& info(ScalarFamily f) {
  return kScalarFamilies[static_cast<std::size_t>(f)];
}

inline std::optional<ScalarFamily> parse_scalar_family(std::string_view s) {
  for (const auto& fi : kScalarFamilies)
    if (fi.name == s) return fi.family;
  return std::nullopt;
}

inline std::optional<ReverseForm> parse_form(std::string_view s) {
  if (s == "lemma") return ReverseForm::lemma;
  if (s == "proposition" || s == "prop") return ReverseForm::proposition;
  return std::nullopt;
}

/// A fully selected scalar inequality: family plus branch or form.
struct ScalarTarget {
  ScalarFamily family = ScalarFamily::reverse_young_basic;
  Branch branch = Branch::i;
  ReverseForm form = ReverseForm::lemma;

  std::string label() const {
    const auto& fi = info(family);
    if (fi.has_branch) return std::string(fi.name) + "/" + std::string(to_string(branch));
    if (fi.has_form) return std::string(fi.name) + "/" + std::string(to_string(form));
    return std::string(fi.name);
  }
  std::string selector() const {
    const auto& fi = info(family);
    if (fi.has_branch) return std::string(to_string(branch));
    if (fi.has_form) return std::string(to_string(form));
    return "-";
  }
  /// Stable integer tag used to derive random substreams.
  std::uint64_t tag() const {
    return static_cast<std::uint64_t>(family) * 4 +
           (info(family).has_form ? static_cast<std::uint64_t>(form)
                                  : static_cast<std::uint64_t>(branch));
  }
};

/// Every (family, branch/form) combination.
inline std::vector<ScalarTarget> all_scalar_targets() {
  std::vector<ScalarTarget> out;
  for (const auto& fi : kScalarFamilies) {
    if (fi.has_branch) {
      out.push_back({fi.family, Branch::i, ReverseForm::lemma});
      out.push_back({fi.family, Branch::ii, ReverseForm::lemma});
    } else if (fi.has_form) {
      out.push_back({fi.family, Branch::i, ReverseForm::lemma});
      out.push_back({fi.family, Branch::i, ReverseForm::proposition});
    } else {
      out.push_back({fi.family, Branch::i, ReverseForm::lemma});
    }
  }
  return out;
}

/// The weight hypothesis of a target at depth n (n ignored when unused).
inline Hypothesis scalar_hypothesis(const ScalarTarget& t, int n) {
  switch (t.family) {
    case ScalarFamily::reverse_young_basic: return Hypothesis::outside(0.0, 1.0);
    case ScalarFamily::corollary_one_term: return one_term_hypothesis(t.branch);
    case ScalarFamily::theorem_main_reverse:
    case ScalarFamily::heinz_reverse_main: return main_reverse_hypothesis(n, t.branch);
    case ScalarFamily::lemma_sm_reverse:
      return t.branch == Branch::i ? Hypothesis::inside(0.0, 0.5) : Hypothesis::inside(0.5, 1.0);
    case ScalarFamily::kittaneh_manasrah:
    case ScalarFamily::zhao_wu_forward:
    case ScalarFamily::zhao_wu_reverse:
    case ScalarFamily::sababheh_choi_forward: return Hypothesis::inside(0.0, 1.0);
    case ScalarFamily::theorem_extended_sc:
    case ScalarFamily::heinz_reverse_sc: return extended_sc_hypothesis(n, t.branch);
  }
  return Hypothesis::inside(0.0, 1.0);
}

/// Evaluates a target. Throws std::domain_error when a required depth is
/// missing or too small.
inline BoundReport evaluate_scalar(const ScalarTarget& t, const ScalarPair& p, const Weight& w,
                                   std::optional<int> n = std::nullopt) {
  const auto& fi = info(t.family);
  if (fi.min_depth > 0) {
    if (!n) throw std::domain_error(std::string(fi.name) + " requires a depth n");
    if (*n < fi.min_depth) {
      throw std::domain_error(std::string(fi.name) + " requires n >= " +
                              std::to_string(fi.min_depth));
    }
  }
  switch (t.family) {
    case ScalarFamily::reverse_young_basic: return reverse_young_basic(p, w);
    case ScalarFamily::corollary_one_term: return corollary_one_term(p, w, t.branch);
    case ScalarFamily::theorem_main_reverse: return theorem_main_reverse(p, w, Depth(*n), t.branch);
    case ScalarFamily::lemma_sm_reverse: return lemma_sm_reverse(p, w, Depth(*n), t.branch);
    case ScalarFamily::kittaneh_manasrah: return kittaneh_manasrah(p, w);
    case ScalarFamily::zhao_wu_forward: return zhao_wu_forward(p, w);
    case ScalarFamily::zhao_wu_reverse: return zhao_wu_reverse(p, w, t.form);
    case ScalarFamily::sababheh_choi_forward: return sababheh_choi_forward(p, w, Depth(*n));
    case ScalarFamily::theorem_extended_sc: return theorem_extended_sc(p, w, Depth(*n), t.branch);
    case ScalarFamily::heinz_reverse_main: return heinz_reverse_main(p, w, Depth(*n), t.branch);
    case ScalarFamily::heinz_reverse_sc: return heinz_reverse_sc(p, w, Depth(*n), t.branch);
  }
  throw std::logic_error("unhandled scalar family");
}

}  // namespace meanbound
