#ifndef GEOMEANS_GEOMEANS_HPP
#define GEOMEANS_GEOMEANS_HPP

#include "config.hpp"
#include "formats.hpp"
#include "forward.hpp"
#include "fractional.hpp"
#include "inversion.hpp"
#include "laplacian.hpp"
#include "log_kernel.hpp"
#include "phantoms.hpp"
#include "potentials.hpp"
#include "profile.hpp"
#include "quadrature.hpp"
#include "spaces.hpp"
#include "special.hpp"
#include "verify.hpp"

#endif
