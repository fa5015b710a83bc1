#pragma once

#include "tacnode/contour.hpp"
#include "tacnode/correlation.hpp"
#include "tacnode/dynamics.hpp"
#include "tacnode/error.hpp"
#include "tacnode/finite_kernel.hpp"
#include "tacnode/limit_kernels.hpp"
#include "tacnode/macro_geometry.hpp"
#include "tacnode/tacnode_kernel.hpp"
#include "tacnode/verify.hpp"
