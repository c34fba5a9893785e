#pragma once

// Umbrella header: exact-accounting random-bit sampling.
//
// The library samples from a continuous density using only a stream of
// fair coin flips, to user accuracy epsilon, and accounts for every bit
// and oracle call it spends:
//
//   bitstream   fair-bit sources: seeded, replayed, counted, recorded
//   dyadic      exact dyadic subintervals of [0,1] at any depth
//   discrete    tree sampling of probability vectors, the lazy U<=t
//               comparator, discrete rejection
//   cdf         CDFs with exact or numeric inverses
//   bisection   epsilon-localization: CDF bisection, per-axis uniform
//               bisection, inversion bisection on a u-interval
//   density     densities exposed through a sup/inf rectangle oracle
//   builtins    the registry of named densities and the ratio pair
//   cantor      the residual-set density whose oracle gap never closes
//   rejection   the quadtree rejection samplers (compact and general)
//               and the deliberately broken bisect-first variant
//   analysis    Riemann gaps, entropies, bound verification experiments
//   csv         shortest round-trip number formatting

#include "bitsampler/analysis.hpp"
#include "bitsampler/bisection.hpp"
#include "bitsampler/bitstream.hpp"
#include "bitsampler/box.hpp"
#include "bitsampler/builtins.hpp"
#include "bitsampler/cantor.hpp"
#include "bitsampler/cdf.hpp"
#include "bitsampler/csv.hpp"
#include "bitsampler/density.hpp"
#include "bitsampler/discrete.hpp"
#include "bitsampler/dyadic.hpp"
#include "bitsampler/errors.hpp"
#include "bitsampler/ratio.hpp"
#include "bitsampler/rejection.hpp"
#include "bitsampler/telemetry.hpp"
