#pragma once

#include "so3ft/clebsch_gordan.hpp"
#include "so3ft/coefficients.hpp"
#include "so3ft/complex_rep.hpp"
#include "so3ft/dft.hpp"
#include "so3ft/elevation.hpp"
#include "so3ft/geometry.hpp"
#include "so3ft/grid.hpp"
#include "so3ft/io.hpp"
#include "so3ft/parallel.hpp"
#include "so3ft/real_rep.hpp"
#include "so3ft/s2_transforms.hpp"
#include "so3ft/shape_match.hpp"
#include "so3ft/transforms.hpp"
#include "so3ft/wigner.hpp"
