//
// Copyright 2026 The Fewshot Adapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Builds against an installed copy of the library.

#include <cstdio>

#include "fewshot/metrics.h"
#include "fewshot/pipeline.h"

int main() {
  fewshot::EvalCorpus corpus;
  corpus.hypotheses.push_back(fewshot::Sentence::Parse("a b c d"));
  corpus.references.push_back(fewshot::Sentence::Parse("a b c d"));
  const double bleu = fewshot::CorpusBleu(corpus).bleu;
  std::printf("fewshot %s bleu %.1f\n", fewshot::kVersion, bleu);
  return bleu == 100.0 ? 0 : 1;
}
