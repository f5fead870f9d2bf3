#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "shiftlab/fcriterion.hpp"
#include "shiftlab/io.hpp"
#include "shiftlab/natset.hpp"
#include "shiftlab/seqspace.hpp"
#include "shiftlab/shiftop.hpp"

namespace shiftlab {
namespace report {

// nlohmann::json objects keep keys sorted, so every document rendered here is
// byte-stable for a fixed configuration.
using json = nlohmann::json;

inline json density_json(const DensityProfile& p) {
  json j;
  j["kind"] = p.kind == DensityKind::lower ? "lower" : (p.kind == DensityKind::upper ? "upper" : "banach-upper");
  j["estimate"] = p.estimate;
  json samples = json::array();
  for (const auto& s : p.samples) samples.push_back(json::array({s.n, s.ratio}));
  j["samples"] = samples;
  return j;
}

inline json witness_json(const APWitness& w) {
  return json{{"start", w.start}, {"difference", w.difference}, {"length", w.length}};
}

inline json ap_profile_json(const APProfile& p) {
  json rows = json::array();
  for (const auto& [k, w] : p) {
    json row{{"difference", k}};
    row["length"] = w ? w->length : 0;
    if (w) row["start"] = w->start;
    rows.push_back(row);
  }
  return json{{"rows", rows}, {"score", ap_score(p)}};
}

inline json chaos_json(const ChaosVerdict& v, std::size_t witness_cap = 500) {
  json j;
  j["verdict"] = v.verdict == Verdict::pass ? "pass" : (v.verdict == Verdict::fail ? "fail" : "inconclusive");
  j["exact"] = v.exact;
  j["growth_floor"] = v.growth_floor;
  j["witness_count"] = v.witnesses.size();
  json w = json::array();
  for (std::size_t i = 0; i < v.witnesses.size() && i < witness_cap; ++i) w.push_back(v.witnesses[i]);
  j["witnesses"] = w;
  json samples = json::array();
  for (const auto& [n, e] : v.exponent_samples) samples.push_back(json::array({n, e}));
  j["exponent_samples"] = samples;
  return j;
}

inline json family_json(const std::vector<APFamilySpec>& family) {
  json rows = json::array();
  for (const auto& f : family)
    for (const auto& b : f.blocks)
      rows.push_back(json{{"k", f.k}, {"start", b.start()}, {"difference", b.difference}, {"length", b.length}});
  return rows;
}

inline json criterion_json(const CriterionReport& rep) {
  json j;
  j["separation_ok"] = rep.separation.ok;
  if (!rep.separation.ok) j["separation_witness"] = json::array({rep.separation.witness_a, rep.separation.witness_b});
  json series = json::array();
  for (const auto& [key, v] : rep.series_norms)
    series.push_back(json{{"k", key.first}, {"kprime", key.second}, {"norm", v}});
  j["series_norms"] = series;
  json ckl = json::array();
  for (const auto& [key, v] : rep.ckl)
    ckl.push_back(json{{"k", std::get<0>(key)}, {"l", std::get<1>(key)}, {"kprime", std::get<2>(key)}, {"C", v}});
  j["ckl"] = ckl;
  json sup = json::array();
  for (const auto& [k, v] : rep.sup_over_l) sup.push_back(json{{"k", k}, {"sup_C", v}});
  j["sup_over_l"] = sup;
  j["series_decay_in_k"] = rep.series_decay_in_k;
  j["sup_decay_in_k"] = rep.sup_decay_in_k;
  j["ckl_decay_in_l"] = rep.ckl_decay_in_l;
  return j;
}

/// AP rows for one family set: only differences admitting a progression of
/// length >= 2 can come from pairwise element differences, so the table is
/// computed on those candidates plus the family's own difference.
inline json family_ap_json(const NatSet& a, Nat family_difference, std::size_t row_cap = 200) {
  std::vector<Nat> candidates;
  const auto& e = a.elements();
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j) candidates.push_back(e[j] - e[i]);
  candidates.push_back(family_difference);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  json rows = json::array();
  APWitness best{};
  for (Nat d : candidates) {
    const auto w = longest_ap_fixed_difference(a, d);
    if (!w) continue;
    if (w->length > best.length) best = *w;
    if ((w->length >= 2 || d == family_difference) && rows.size() < row_cap)
      rows.push_back(json{{"difference", d}, {"start", w->start}, {"length", w->length}});
  }
  json j;
  j["family_difference"] = family_difference;
  const auto at_family = longest_ap_fixed_difference(a, family_difference);
  j["at_family_difference"] = at_family ? witness_json(*at_family) : json(nullptr);
  j["best"] = best.length > 0 ? witness_json(best) : json(nullptr);
  j["rows"] = rows;
  return j;
}

/// The full desk-scale document: S statistics, weight resets, the chaos
/// verdict, the constructed A_k family, the criterion tables, and AP profiles
/// of each A_k.
inline json counterexample_report(Nat horizon, Nat kmax, Nat blocks, const std::vector<Nat>& kprimes,
                                  double growth_floor = 20.0) {
  const WeightRule rule = WeightRule::counterexample();
  json j;
  j["config"] = json{{"horizon", horizon}, {"kmax", kmax},         {"blocks", blocks},
                     {"space", "c0"},      {"kprimes", kprimes},   {"growth_floor", growth_floor},
                     {"rule", "paper-counterexample"}};

  const NatSet s = counterexample::support_set(horizon);
  Nat block_count = 0;  // maximal runs of S intersecting [1, horizon]
  for (std::size_t i = 0; i < s.elements().size(); ++i)
    if (i == 0 || s.elements()[i - 1] + 1 != s.elements()[i]) ++block_count;
  std::vector<Nat> resets;
  for (Nat n = 2; n <= horizon; ++n)
    if (counterexample::is_reset_index(n)) resets.push_back(n);
  json sup;
  sup["element_count"] = s.size();
  sup["block_count"] = block_count;
  sup["density_at_horizon"] = static_cast<double>(s.size()) / static_cast<double>(horizon);
  if (horizon >= 9) sup["banach_upper_window9"] = density_profile(s, DensityKind::banach_upper, 9).estimate;
  json first = json::array();
  for (std::size_t i = 0; i < s.elements().size() && i < 24; ++i) first.push_back(s.elements()[i]);
  sup["first_elements"] = first;
  j["support"] = sup;

  json weights;
  weights["reset_count"] = resets.size();
  json first_resets = json::array();
  for (std::size_t i = 0; i < resets.size() && i < 24; ++i) first_resets.push_back(resets[i]);
  weights["first_resets"] = first_resets;
  json samples = json::array();
  for (Nat n : {Nat{9}, Nat{10}, Nat{11}, Nat{12}, Nat{19}, Nat{22}, Nat{98}, Nat{103}})
    if (n <= horizon) samples.push_back(json::array({n, io::format_scalar(rule.weight(n))}));
  weights["samples"] = samples;
  j["weights"] = weights;

  j["chaos"] = chaos_json(chaos_criterion(rule, SpaceTag::c0(), horizon, growth_floor));

  const auto family = build_family(kmax, blocks, horizon);
  j["family"] = family_json(family);
  j["criterion"] = criterion_json(full_report(rule, family, kprimes, SpaceTag::c0(), horizon));

  json profiles = json::array();
  for (const auto& f : family) {
    json p = family_ap_json(f.to_natset(horizon), detail::pow10_saturating(2 * f.k, horizon));
    p["k"] = f.k;
    profiles.push_back(p);
  }
  j["ap_profiles"] = profiles;
  return j;
}

inline std::string render(const json& j) { return j.dump(2) + "\n"; }

}  // namespace report
}  // namespace shiftlab
