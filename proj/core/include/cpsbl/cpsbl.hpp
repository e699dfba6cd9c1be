#ifndef CPSBL_CPSBL_HPP
#define CPSBL_CPSBL_HPP

// Umbrella header.
#include "cpsbl/channel_model.hpp"
#include "cpsbl/config.hpp"
#include "cpsbl/cross_predictive.hpp"
#include "cpsbl/esbl.hpp"
#include "cpsbl/experiment.hpp"
#include "cpsbl/gradient_check.hpp"
#include "cpsbl/measurement_model.hpp"
#include "cpsbl/posterior.hpp"
#include "cpsbl/random.hpp"
#include "cpsbl/results_io.hpp"
#include "cpsbl/types.hpp"

#endif  // CPSBL_CPSBL_HPP
