#pragma once

#include "fracocp/errors.hpp"
#include "fracocp/fem1d.hpp"
#include "fracocp/fracweights.hpp"
#include "fracocp/grid.hpp"
#include "fracocp/history.hpp"
#include "fracocp/ocp.hpp"
#include "fracocp/study.hpp"
#include "fracocp/study_io.hpp"
#include "fracocp/subdiff.hpp"
#include "fracocp/trajectory.hpp"
#include "fracocp/verify.hpp"
