#pragma once

#include "rbm/asymptotics.hpp"
#include "rbm/conformal.hpp"
#include "rbm/curve.hpp"
#include "rbm/errors.hpp"
#include "rbm/io.hpp"
#include "rbm/kernel.hpp"
#include "rbm/laplace.hpp"
#include "rbm/lcp.hpp"
#include "rbm/mc_oracle.hpp"
#include "rbm/model.hpp"
#include "rbm/parallel.hpp"
