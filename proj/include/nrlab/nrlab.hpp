#pragma once

// Umbrella header for the nonresponse-lab library.

#include "nrlab/association.hpp"
#include "nrlab/csv.hpp"
#include "nrlab/cv_audit.hpp"
#include "nrlab/errors.hpp"
#include "nrlab/exact.hpp"
#include "nrlab/format.hpp"
#include "nrlab/manifest.hpp"
#include "nrlab/nonresponse.hpp"
#include "nrlab/rng.hpp"
#include "nrlab/scoring.hpp"
#include "nrlab/simulate.hpp"
#include "nrlab/study.hpp"
#include "nrlab/sweep.hpp"
