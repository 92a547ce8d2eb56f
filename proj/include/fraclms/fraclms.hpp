#ifndef FRACLMS_FRACLMS_HPP
#define FRACLMS_FRACLMS_HPP

#include <fraclms/adaptive_filters.hpp>
#include <fraclms/correlation_objectives.hpp>
#include <fraclms/fractional_calculus.hpp>
#include <fraclms/learning_curve.hpp>
#include <fraclms/metrics_analysis.hpp>
#include <fraclms/replication.hpp>
#include <fraclms/sim_harness.hpp>

#endif  // FRACLMS_FRACLMS_HPP
