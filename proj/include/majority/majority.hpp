#pragma once

#include <majority/adversary.hpp>
#include <majority/arena.hpp>
#include <majority/bound.hpp>
#include <majority/graph.hpp>
#include <majority/io.hpp>
#include <majority/model.hpp>
#include <majority/session.hpp>
#include <majority/strategy.hpp>
