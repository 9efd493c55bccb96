#pragma once

#include "upqc/bernstein.hpp"
#include "upqc/classify.hpp"
#include "upqc/defaults.hpp"
#include "upqc/equidist.hpp"
#include "upqc/errors.hpp"
#include "upqc/functions.hpp"
#include "upqc/io.hpp"
#include "upqc/rational.hpp"
#include "upqc/sequence.hpp"
#include "upqc/witnesses.hpp"
