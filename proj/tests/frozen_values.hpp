#pragma once

// Reference numbers produced by tests/oracles/frozen_values.py (numpy/scipy:
// eigvalsh, logm, brute-force product and measurement searches, brentq).

#include <array>

#include "bdcorr/states.hpp"

namespace frozen {

inline constexpr std::array<double, 4> kHermitianEigs{-1.68290810440311, -0.0640305822777442,
                                                      2.07597400798723, 2.67096467869363};
inline constexpr double kHermitianTraceNorm = 6.49387737336171;

// (0.3,-0.2,0.1) against (-0.5,0.4,0.6)
inline constexpr double kBdTraceDistance = 0.475;
inline constexpr double kBdEntropy = 1.90370169605735;
inline constexpr double kBdRelativeEntropy = 0.738079757383002;

struct StateRef {
  bdcorr::BellDiagonal r;
  double t_td;   // product-state search
  double d_td;   // measurement search
  double t_ent;  // mutual information
  double c_ent;  // measured classical correlation
};

inline constexpr std::array<StateRef, 8> kStates{{
    {{0.3, -0.2, -0.4}, 0.217135964116366, 0.15, 0.297142481986944, 0.118709100769308},
    {{-0.5, 0.1, 0.35}, 0.24524094054126, 0.175, 0.285351302894466, 0.188721875540867},
    {{0.2, 0.7, -0.1}, 0.312440474840756, 0.1, 0.42161017527648, 0.390159695283599},
    {{1.0, -0.6, 0.6}, 0.55, 0.3, 1.27807190511264, 1.0},
    {{0.6, 0.0, 0.4}, 0.280624847486621, 0.2, 0.514524702772666, 0.278071905112638},
    {{-0.7, -0.7, -0.8}, 0.55, 0.35, 0.978071905112638, 0.531004406410719},
    {{0.9, -0.5, 0.45}, 0.4625, 0.25, 0.902324918424911, 0.713603042884044},
    {{-0.25, 0.6, 0.6}, 0.3625, 0.3, 0.582165657986397, 0.278071905112638},
}};

// Strongly entangled states whose closest product state is off the axis.
inline constexpr std::array<StateRef, 2> kOffAxisStates{{
    {{0.9, -0.8, 0.88}, 0.631516243621462, 0.44, 1.38707429496674, 0.713603042884045},
    {{-0.95, -0.94, -0.92}, 0.673368972552325, 0.47, 1.65488199873653, 0.83133906850333},
}};

// Phase flip with tau = 5, |alpha| = 1.
inline constexpr double kNuStarLevel06 = 0.0346444082169352;
inline constexpr double kNuStarLevel23 = 0.0311014683794015;
inline constexpr double kF01 = -0.333248986080509;
inline constexpr double kF05 = -0.52920881890702;

// Random-field map of bd(0.3,-0.2,0.5) at gt = 0.37.
inline constexpr std::array<double, 3> kRandomFieldR{0.163600743669646, -0.2, 0.272667906116077};

}  // namespace frozen
