#pragma once

#include "gitgauge/rational.hpp"
#include "gitgauge/linalg.hpp"
#include "gitgauge/simplex.hpp"
#include "gitgauge/geometry.hpp"
#include "gitgauge/parallel.hpp"
#include "gitgauge/git.hpp"
#include "gitgauge/mundet.hpp"
#include "gitgauge/scaled.hpp"
#include "gitgauge/oracles.hpp"
