#pragma once

#include "ldg/energy.hpp"
#include "ldg/error.hpp"
#include "ldg/fields.hpp"
#include "ldg/hedgehog_ode.hpp"
#include "ldg/identities.hpp"
#include "ldg/io.hpp"
#include "ldg/material.hpp"
#include "ldg/qtensor.hpp"
#include "ldg/quadrature.hpp"
#include "ldg/relax.hpp"
