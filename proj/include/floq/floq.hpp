// floq.hpp — Umbrella include for the Floquet-Lindblad engine.

#pragma once

#include "floq/common.hpp"
#include "floq/ensemble.hpp"
#include "floq/io.hpp"
#include "floq/linalg.hpp"
#include "floq/model.hpp"
#include "floq/optics.hpp"
#include "floq/propagator.hpp"
#include "floq/sambe.hpp"
#include "floq/spectral.hpp"
#include "floq/superop.hpp"
