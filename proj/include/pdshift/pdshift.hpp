#pragma once

#include "pdshift/word.hpp"
#include "pdshift/rational.hpp"
#include "pdshift/sequence.hpp"
#include "pdshift/language.hpp"
#include "pdshift/linalg.hpp"
#include "pdshift/measure.hpp"
#include "pdshift/recurrence.hpp"
