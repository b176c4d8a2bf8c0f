#ifndef FRAMELET_ALL_HPP
#define FRAMELET_ALL_HPP

#include "framelet/bases.hpp"
#include "framelet/conv.hpp"
#include "framelet/core.hpp"
#include "framelet/corpus.hpp"
#include "framelet/framelet.hpp"
#include "framelet/hankel.hpp"
#include "framelet/lowrank.hpp"
#include "framelet/mra.hpp"
#include "framelet/network.hpp"
#include "framelet/nonlin.hpp"
#include "framelet/parallel.hpp"
#include "framelet/pr_analysis.hpp"
#include "framelet/restoration.hpp"
#include "framelet/trainer.hpp"

#endif /* FRAMELET_ALL_HPP */
