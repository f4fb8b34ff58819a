// SPDX-License-Identifier: Apache-2.0
//
// Shared path-loss fixture. Expected values are frozen from an independent
// evaluation of the UMa closed forms:
//   LOS (d2d <= d'BP):  28 + 22 log10(d3d) + 20 log10(fc)
//   LOS (d2d >  d'BP):  28 + 40 log10(d3d) + 20 log10(fc) - 9 log10(d'BP^2 + dh^2)
//   NLOS:               max(PL_LOS, 13.54 + 39.08 log10(d3d) + 20 log10(fc)
//                                   - 0.6 (h_ut - 1.5))
// with d3d = sqrt(d2d^2 + (h_bs - h_ut)^2) and
// d'BP = 4 (h_bs - 1)(h_ut - 1) fc / c. At 28 GHz, h_bs 25 m, h_ut 1.5 m the
// breakpoint sits at exactly 4480 m.
#pragma once

namespace ransim_test {

struct PathLossCase {
    double d2d_m, h_bs_m, h_ut_m, fc_ghz;
    bool los;
    double expected_db;
};

// Derivations (fc term = 20 log10(28) = 28.943161 dB unless stated):
//  1. d3d 25.539186, 28 + 22*1.407235 + fc = 87.901716
//  2. d3d 55.247172, 28 + 22*1.742280 + fc = 95.273982
//  3. d3d 102.724145, 28 + 22*1.011673e1/10... = 101.199956
//  4. d3d 500.551945 -> 116.331042
//  5. at the breakpoint (PL1 branch): d3d 4480.061635 -> 137.271408
//  6. beyond the breakpoint (PL2 branch): d3d 5000.055225 -> 139.179041
//  7. NLOS: 13.54 + 39.08*2.011673 + fc = 121.099323 (> LOS 101.200)
//  8. NLOS: 13.54 + 39.08*2.699449 + fc = 147.977634
//  9. NLOS: 13.54 + 39.08*3.000120 + fc = 159.727846
// 10. h_ut 13: NLOS' = 82.232758 < PL_LOS = 83.204449, max rule returns LOS
inline constexpr PathLossCase kPathLossCases[] = {
    {10.0, 25.0, 1.5, 28.0, true, 87.901716},
    {50.0, 25.0, 1.5, 28.0, true, 95.273982},
    {100.0, 25.0, 1.5, 28.0, true, 101.199956},
    {500.0, 25.0, 1.5, 28.0, true, 116.331042},
    {4480.0, 25.0, 1.5, 28.0, true, 137.271408},
    {5000.0, 25.0, 1.5, 28.0, true, 139.179041},
    {100.0, 25.0, 1.5, 28.0, false, 121.099323},
    {500.0, 25.0, 1.5, 28.0, false, 147.977634},
    {1000.0, 25.0, 1.5, 28.0, false, 159.727846},
    {10.0, 25.0, 13.0, 28.0, false, 83.204449},
};

}  // namespace ransim_test
