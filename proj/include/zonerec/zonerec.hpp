#pragma once

#include "zonerec/corpus.hpp"
#include "zonerec/error.hpp"
#include "zonerec/evaluation.hpp"
#include "zonerec/features.hpp"
#include "zonerec/geo.hpp"
#include "zonerec/linear_svm.hpp"
#include "zonerec/metrics.hpp"
#include "zonerec/model.hpp"
#include "zonerec/random_forest.hpp"
#include "zonerec/ranking.hpp"
#include "zonerec/rbf_svm.hpp"
#include "zonerec/report.hpp"
#include "zonerec/service.hpp"
#include "zonerec/stats.hpp"
#include "zonerec/synthetic.hpp"
#include "zonerec/text.hpp"
