#ifndef FRACSPEC_FRACSPEC_HPP
#define FRACSPEC_FRACSPEC_HPP

#include "fracspec/diagnostics.hpp"
#include "fracspec/discretize.hpp"
#include "fracspec/error.hpp"
#include "fracspec/fracpow.hpp"
#include "fracspec/grid.hpp"
#include "fracspec/numcore.hpp"
#include "fracspec/semigroup.hpp"
#include "fracspec/transform.hpp"

#endif // FRACSPEC_FRACSPEC_HPP
