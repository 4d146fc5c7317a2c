#pragma once

#include "bitreset/bounds.hpp"
#include "bitreset/coherence.hpp"
#include "bitreset/commands.hpp"
#include "bitreset/engine.hpp"
#include "bitreset/io.hpp"
#include "bitreset/martingale.hpp"
#include "bitreset/multibit.hpp"
#include "bitreset/protocol.hpp"
#include "bitreset/sampling.hpp"
#include "bitreset/verify.hpp"
#include "bitreset/work_distribution.hpp"
