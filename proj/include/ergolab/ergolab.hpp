#pragma once

// Umbrella header.

#include "ergolab/error.hpp"

#include "ergolab/numerics/fft.hpp"
#include "ergolab/numerics/fit.hpp"
#include "ergolab/numerics/grid.hpp"
#include "ergolab/numerics/norms.hpp"
#include "ergolab/numerics/parallel.hpp"
#include "ergolab/numerics/phase_integral.hpp"
#include "ergolab/numerics/quadrature.hpp"
#include "ergolab/numerics/rng.hpp"

#include "ergolab/dynamics/coboundary.hpp"
#include "ergolab/dynamics/torus.hpp"
#include "ergolab/dynamics/transfer.hpp"
#include "ergolab/dynamics/trig_polynomial.hpp"

#include "ergolab/averages/average.hpp"
#include "ergolab/averages/lacunary.hpp"
#include "ergolab/averages/maximal.hpp"

#include "ergolab/bilinear/band.hpp"
#include "ergolab/bilinear/cutoffs.hpp"
#include "ergolab/bilinear/experiments.hpp"
#include "ergolab/bilinear/local_operator.hpp"
#include "ergolab/bilinear/transference.hpp"

#include "ergolab/lab/config.hpp"
#include "ergolab/lab/csv.hpp"
#include "ergolab/lab/manifest.hpp"
#include "ergolab/lab/report.hpp"
#include "ergolab/lab/run.hpp"
