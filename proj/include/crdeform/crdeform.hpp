#pragma once

// Everything: model, complex, norms, Galerkin/Hodge, Kuranishi, Rumin, runner.

#include "crdeform/config.hpp"
#include "crdeform/deformation_complex.hpp"
#include "crdeform/frame_operator.hpp"
#include "crdeform/galerkin.hpp"
#include "crdeform/hermite_basis.hpp"
#include "crdeform/hodge.hpp"
#include "crdeform/kuranishi.hpp"
#include "crdeform/majorant.hpp"
#include "crdeform/norms.hpp"
#include "crdeform/probes.hpp"
#include "crdeform/report.hpp"
#include "crdeform/rumin.hpp"
#include "crdeform/runner.hpp"
#include "crdeform/sampling.hpp"
