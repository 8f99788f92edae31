#pragma once

#include "pskq/attraction.hpp"
#include "pskq/channel.hpp"
#include "pskq/constellation.hpp"
#include "pskq/curve.hpp"
#include "pskq/detector.hpp"
#include "pskq/errors.hpp"
#include "pskq/math.hpp"
#include "pskq/montecarlo.hpp"
#include "pskq/quadrature.hpp"
#include "pskq/quantizer.hpp"
#include "pskq/result_io.hpp"
#include "pskq/rng.hpp"
#include "pskq/sep.hpp"
