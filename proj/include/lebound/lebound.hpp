#pragma once

#include "analytic.hpp"
#include "commands.hpp"
#include "dense.hpp"
#include "entanglement.hpp"
#include "gd.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "localizable.hpp"
#include "noise.hpp"
#include "pauli.hpp"
#include "verify.hpp"
