#pragma once

#include "cjet/analysis.hpp"
#include "cjet/curve_model.hpp"
#include "cjet/curve_recon.hpp"
#include "cjet/error.hpp"
#include "cjet/numeric_oracle.hpp"
#include "cjet/plot.hpp"
#include "cjet/random.hpp"
#include "cjet/series.hpp"
#include "cjet/surface_model.hpp"
#include "cjet/surface_recon.hpp"
