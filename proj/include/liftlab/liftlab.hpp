#pragma once

#include "liftlab/catalog.hpp"
#include "liftlab/config.hpp"
#include "liftlab/conformal.hpp"
#include "liftlab/dual.hpp"
#include "liftlab/errors.hpp"
#include "liftlab/expr.hpp"
#include "liftlab/flow_oracle.hpp"
#include "liftlab/lie_calculus.hpp"
#include "liftlab/lift_fields.hpp"
#include "liftlab/linalg.hpp"
#include "liftlab/manifold.hpp"
#include "liftlab/suites.hpp"
#include "liftlab/tangent_bundle.hpp"
