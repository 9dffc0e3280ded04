#pragma once

#include "berkskel/error.hpp"
#include "berkskel/rational.hpp"
#include "berkskel/pm_function.hpp"
#include "berkskel/report.hpp"
#include "berkskel/skeleton.hpp"
#include "berkskel/morphism.hpp"
#include "berkskel/different.hpp"
#include "berkskel/profile.hpp"
#include "berkskel/models.hpp"
#include "berkskel/document.hpp"
