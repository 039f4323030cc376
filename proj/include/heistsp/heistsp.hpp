#pragma once

#include "heistsp/heisenberg.hpp"
#include "heistsp/horizontal_line.hpp"
#include "heistsp/planar.hpp"
#include "heistsp/beta.hpp"
#include "heistsp/curve.hpp"
#include "heistsp/multiscale.hpp"
#include "heistsp/builder.hpp"
#include "heistsp/future_ball.hpp"
#include "heistsp/verify.hpp"
#include "heistsp/io.hpp"
