/*
 * Copyright 2026 The pragmatune Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pragmatune/error.h"

namespace pragmatune {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidDefinition: return "InvalidDefinition";
    case Errc::kDuplicateName: return "DuplicateName";
    case Errc::kUnknownConditionTarget: return "UnknownConditionTarget";
    case Errc::kDefaultNotInValues: return "DefaultNotInValues";
    case Errc::kCyclicCondition: return "CyclicCondition";
    case Errc::kOverflow: return "Overflow";
    case Errc::kValueNotInDomain: return "ValueNotInDomain";
    case Errc::kSpaceTooLarge: return "SpaceTooLarge";
    case Errc::kEmptyTrainingSet: return "EmptyTrainingSet";
    case Errc::kTrainingSetTooLarge: return "TrainingSetTooLarge";
    case Errc::kSingularKernel: return "SingularKernel";
    case Errc::kFeatureLengthMismatch: return "FeatureLengthMismatch";
    case Errc::kMissingToken: return "MissingToken";
    case Errc::kUnknownObjective: return "UnknownObjective";
    case Errc::kIoError: return "IoError";
    case Errc::kIndexGap: return "IndexGap";
    case Errc::kNoSuccessfulEvaluation: return "NoSuccessfulEvaluation";
    case Errc::kSchemaMismatch: return "SchemaMismatch";
    case Errc::kParseError: return "ParseError";
    case Errc::kConsistencyError: return "ConsistencyError";
    case Errc::kEmptyTrace: return "EmptyTrace";
    case Errc::kUnknownPreset: return "UnknownPreset";
    case Errc::kInvalidProblem: return "InvalidProblem";
    case Errc::kNoFeasibleConfiguration: return "NoFeasibleConfiguration";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace pragmatune
