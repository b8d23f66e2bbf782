#pragma once

#include "layerfid/campaign/config.hpp"
#include "layerfid/campaign/output.hpp"

namespace layerfid {

/// Runs one campaign in memory. A series that throws is recorded in
/// `failures` and the rest of the campaign continues; configuration errors
/// throw std::invalid_argument before any simulation starts.
///
/// Panels by campaign (x / y):
///   figure4            figure4_top: pair index / pair process error
///                      figure4_bottom: T1 = T2 in us / full-layer error
///   figure5            figure5_top, figure5_middle, figure5_bottom:
///                      ZZ rate in kHz / layer error
///   figure6            figure6: scenario index (a = 0) / full-layer error
///   mirror_compare     mirror_polarization: depth / polarization or LF^l
///                      mirror_errors: 0 / full-layer error per method
///   layer_count_sweep  lf_vs_layers: disjoint layers / LF
///   gamma_compare      gamma_vs_n: subchain length / gamma
///   lf_scan            lf_vs_n, eplg_vs_n: subchain length / LF, EPLG
///                      isolated_vs_layered: quantile / pair error
///   theory_check       gamma_vs_fidelity: process fidelity / gamma^-1/2
///                      lemma_gap: N / gap
CampaignOutput run_campaign(const CampaignConfig& config);

}  // namespace layerfid
