/*!
  \file errors.hpp
  \brief Exception hierarchy shared by all comploc modules
*/

#pragma once

#include <stdexcept>
#include <string>

namespace comploc
{

/*! \brief Base class of every error raised by the library */
class comploc_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Malformed argument: out-of-range coordinate, overlapping fixing, bad table size */
class argument_error : public comploc_error
{
public:
  using comploc_error::comploc_error;
};

/*! \brief Instance exceeds the exhaustive-enumeration limits */
class sizing_error : public comploc_error
{
public:
  using comploc_error::comploc_error;
};

/*! \brief Text input does not follow one of the line formats */
class parse_error : public comploc_error
{
public:
  using comploc_error::comploc_error;
};

/*! \brief A stated precondition on the mathematical objects does not hold
 *
 * Examples are a composition that does not verify against its claimed target,
 * or a lookup of an inner-output vector the outer function does not map.
 */
class precondition_error : public comploc_error
{
public:
  using comploc_error::comploc_error;
};

/*! \brief A construction is infeasible at the requested parameters */
class infeasible_error : public comploc_error
{
public:
  using comploc_error::comploc_error;
};

} // namespace comploc
