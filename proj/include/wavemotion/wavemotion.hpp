#pragma once

#include "wavemotion/config.hpp"
#include "wavemotion/descriptor.hpp"
#include "wavemotion/dwt.hpp"
#include "wavemotion/filter_bank.hpp"
#include "wavemotion/kmeans.hpp"
#include "wavemotion/median_filter.hpp"
#include "wavemotion/metrics.hpp"
#include "wavemotion/parallel.hpp"
#include "wavemotion/pgm.hpp"
#include "wavemotion/pipeline.hpp"
#include "wavemotion/synthetic.hpp"
#include "wavemotion/types.hpp"
#include "wavemotion/wavelet_leader.hpp"
