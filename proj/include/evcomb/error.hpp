/*
 *   Copyright 2026 The evcomb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * Error kinds raised by the evcomb library. Every failure is reported as an
 * evcomb::Error carrying one ErrorKind; what() starts with the kind name.
 */

#ifndef EVCOMB_ERROR_HPP
#define EVCOMB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace evcomb {

enum class ErrorKind {
	InvalidInterval,
	OutOfRange,
	DuplicateIdempotent,
	IdentityOutsideInterval,
	NotSeparated,
	CrossSide,
	NonpositiveParameter,
	OutOfSegment,
	DomainMismatch,
	UndefinedEndpointPair,
	PriorOutOfRange,
	TargetNotBracketed,
	NoConvergence,
	SpecInvalid,
	NoIdentityForEmptyFold,
	UnknownEvidenceId,
	PerturbationTooLarge,
	DegeneratePosterior,
	MalformedInput
};

constexpr std::string_view to_string( ErrorKind kind ) noexcept {
	switch( kind ) {
		case ErrorKind::InvalidInterval: return "InvalidInterval";
		case ErrorKind::OutOfRange: return "OutOfRange";
		case ErrorKind::DuplicateIdempotent: return "DuplicateIdempotent";
		case ErrorKind::IdentityOutsideInterval: return "IdentityOutsideInterval";
		case ErrorKind::NotSeparated: return "NotSeparated";
		case ErrorKind::CrossSide: return "CrossSide";
		case ErrorKind::NonpositiveParameter: return "NonpositiveParameter";
		case ErrorKind::OutOfSegment: return "OutOfSegment";
		case ErrorKind::DomainMismatch: return "DomainMismatch";
		case ErrorKind::UndefinedEndpointPair: return "UndefinedEndpointPair";
		case ErrorKind::PriorOutOfRange: return "PriorOutOfRange";
		case ErrorKind::TargetNotBracketed: return "TargetNotBracketed";
		case ErrorKind::NoConvergence: return "NoConvergence";
		case ErrorKind::SpecInvalid: return "SpecInvalid";
		case ErrorKind::NoIdentityForEmptyFold: return "NoIdentityForEmptyFold";
		case ErrorKind::UnknownEvidenceId: return "UnknownEvidenceId";
		case ErrorKind::PerturbationTooLarge: return "PerturbationTooLarge";
		case ErrorKind::DegeneratePosterior: return "DegeneratePosterior";
		case ErrorKind::MalformedInput: return "MalformedInput";
	}
	return "Unknown";
}

class Error : public std::runtime_error {
public:
	Error( ErrorKind kind, const std::string &detail ) :
		std::runtime_error( std::string( to_string( kind ) ) + ": " + detail ),
		kind_( kind ) {}

	ErrorKind kind() const noexcept { return kind_; }

private:
	ErrorKind kind_;
};

} // namespace evcomb

#endif // EVCOMB_ERROR_HPP
