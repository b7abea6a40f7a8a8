#ifndef MAGCHEEGER_MAGCHEEGER_HPP
#define MAGCHEEGER_MAGCHEEGER_HPP

#include "magcheeger/error.hpp"
#include "magcheeger/group.hpp"
#include "magcheeger/graph.hpp"
#include "magcheeger/graph_io.hpp"
#include "magcheeger/linalg.hpp"
#include "magcheeger/random.hpp"
#include "magcheeger/parallel.hpp"
#include "magcheeger/spectral.hpp"
#include "magcheeger/frustration.hpp"
#include "magcheeger/cheeger.hpp"
#include "magcheeger/multiway.hpp"
#include "magcheeger/generate.hpp"

#endif  // MAGCHEEGER_MAGCHEEGER_HPP
