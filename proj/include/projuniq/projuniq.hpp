#ifndef PROJUNIQ_PROJUNIQ_HPP
#define PROJUNIQ_PROJUNIQ_HPP

// Everything: exact scalars, projective geometry, configurations and
// certificates, von Staudt arithmetic, hulls, the universality pipeline,
// Shephard-type experiments, and file/SVG I/O.

#include "projuniq/exact/scalar.hpp"
#include "projuniq/linalg.hpp"
#include "projuniq/projgeom.hpp"
#include "projuniq/config.hpp"
#include "projuniq/derive.hpp"
#include "projuniq/vonstaudt.hpp"
#include "projuniq/random.hpp"
#include "projuniq/hull.hpp"
#include "projuniq/universal.hpp"
#include "projuniq/shephard.hpp"
#include "projuniq/io/expr.hpp"
#include "projuniq/io/json_io.hpp"
#include "projuniq/io/svg.hpp"

#endif  // PROJUNIQ_PROJUNIQ_HPP
