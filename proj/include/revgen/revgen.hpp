#pragma once

#include "revgen/affine.hpp"
#include "revgen/coupled.hpp"
#include "revgen/errors.hpp"
#include "revgen/langevin.hpp"
#include "revgen/maps.hpp"
