#pragma once

#include "qflag/rational.hpp"
#include "qflag/laurent.hpp"
#include "qflag/qscalar.hpp"
#include "qflag/cartan.hpp"
#include "qflag/linalg.hpp"
#include "qflag/repn.hpp"
#include "qflag/relations.hpp"
#include "qflag/coord.hpp"
#include "qflag/check.hpp"
#include "qflag/flagproj.hpp"
#include "qflag/hochschild.hpp"
#include "qflag/classical.hpp"
#include "qflag/report.hpp"
#include "qflag/suite.hpp"
