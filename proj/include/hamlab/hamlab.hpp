#ifndef HAMLAB_HAMLAB_HPP
#define HAMLAB_HAMLAB_HPP

#include "hamlab/domain.hpp"
#include "hamlab/errors.hpp"
#include "hamlab/flow.hpp"
#include "hamlab/gallery.hpp"
#include "hamlab/grid_map.hpp"
#include "hamlab/group.hpp"
#include "hamlab/hamiltonian.hpp"
#include "hamlab/interpolate.hpp"
#include "hamlab/invariants.hpp"
#include "hamlab/io.hpp"
#include "hamlab/metrics.hpp"
#include "hamlab/reparam.hpp"

#endif
