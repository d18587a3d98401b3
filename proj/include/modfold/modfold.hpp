#pragma once

#include "version.hpp"
#include "errors.hpp"
#include "fold.hpp"
#include "separated_set.hpp"
#include "signal.hpp"
#include "quadrature.hpp"
#include "spectrum.hpp"
#include "linalg.hpp"
#include "jacobi.hpp"
#include "gram.hpp"
#include "frame_bounds.hpp"
#include "projection.hpp"
#include "prolate.hpp"
#include "lll.hpp"
#include "enumerate.hpp"
#include "certificates.hpp"
#include "critical.hpp"
#include "unfolding.hpp"
#include "serialize.hpp"
#include "experiments.hpp"
