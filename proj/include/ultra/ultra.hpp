#pragma once

#include "ultra/ca.hpp"
#include "ultra/corpus.hpp"
#include "ultra/csv.hpp"
#include "ultra/error.hpp"
#include "ultra/point_cloud.hpp"
#include "ultra/report.hpp"
#include "ultra/rng.hpp"
#include "ultra/synthetic.hpp"
#include "ultra/ultrametricity.hpp"
