#pragma once

#include "lrp/capacitors.hpp"
#include "lrp/components.hpp"
#include "lrp/cutoff.hpp"
#include "lrp/environment.hpp"
#include "lrp/error.hpp"
#include "lrp/heat_kernel.hpp"
#include "lrp/io.hpp"
#include "lrp/model.hpp"
#include "lrp/potential.hpp"
#include "lrp/rng.hpp"
#include "lrp/spectral_fit.hpp"
#include "lrp/verify.hpp"
#include "lrp/version.hpp"
#include "lrp/stats.hpp"
