#pragma once

#include "cli.hpp"
#include "dsl.hpp"
#include "evolution.hpp"
#include "formula.hpp"
#include "kernel.hpp"
#include "postulates.hpp"
#include "revision.hpp"
#include "update.hpp"
