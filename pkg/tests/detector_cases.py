"""Handcrafted detector fixtures: at least three positive and three negative questions per criterion.

Each case is (criterion, expected_flag, question). Positives violate the criterion; negatives
are near misses chosen to sit just outside the rule.
"""

from __future__ import annotations

import hashlib

from iwflint.model import Criterion as C
from iwflint.model import Question


def q(stem: str, options, answer: int = 0, qid: str = "") -> Question:
    if not qid:
        qid = "x" + hashlib.sha1(repr((stem, tuple(options), answer)).encode()).hexdigest()[:10]
    return Question(qid, stem, tuple(options), answer)


GAS = "Which gas is most abundant in Earth's atmosphere?"
GAS_OPTIONS = ["Nitrogen", "Oxygen", "Argon", "Carbon dioxide"]

CASES: list[tuple[C, bool, Question]] = [
    # none_of_the_above
    (C.NONE_OF_THE_ABOVE, True, q(GAS, ["Nitrogen", "Oxygen", "Argon", "None of the above"])),
    (C.NONE_OF_THE_ABOVE, True, q(GAS, ["Nitrogen", "Oxygen", "Argon", "none of the abve"])),
    (C.NONE_OF_THE_ABOVE, True, q(GAS, ["Nitrogen", "Oxygen", "None of these", "Argon"])),
    (C.NONE_OF_THE_ABOVE, True, q(GAS, ["Nitrogen", "Oxygen", "Argon", "None of them"])),
    (C.NONE_OF_THE_ABOVE, False, q("What is 2 + 2?", ["2", "4", "6", "8"], 1)),
    (C.NONE_OF_THE_ABOVE, False, q(GAS, GAS_OPTIONS)),
    (C.NONE_OF_THE_ABOVE, False, q(GAS, ["Nitrogen", "Oxygen", "None", "Argon"])),
    (C.NONE_OF_THE_ABOVE, False, q(GAS, ["Nitrogen", "Oxygen", "Argon", "All of the above"])),
    # all_of_the_above
    (C.ALL_OF_THE_ABOVE, True, q(GAS, ["Nitrogen", "Oxygen", "Argon", "All of the above"])),
    (C.ALL_OF_THE_ABOVE, True, q(GAS, ["Nitrogen", "Oxygen", "Argon", "all the above"])),
    (C.ALL_OF_THE_ABOVE, True, q(GAS, ["Nitrogen", "All of these", "Oxygen", "Argon"])),
    (C.ALL_OF_THE_ABOVE, True, q(GAS, ["Nitrogen", "Oxygen", "Argon", "All of them"])),
    (C.ALL_OF_THE_ABOVE, False, q(GAS, GAS_OPTIONS)),
    (C.ALL_OF_THE_ABOVE, False, q("Which animal is a mammal?", ["Whale", "Shark", "Trout", "Eel"])),
    (C.ALL_OF_THE_ABOVE, False, q(GAS, ["Nitrogen", "Oxygen", "Argon", "None of the above"])),
    # longest_option_correct
    (
        C.LONGEST_OPTION_CORRECT,
        True,
        q(
            "Why do leaves appear green?",
            ["They reflect green wavelengths while absorbing red and blue light", "They are cold", "They hold water", "They lack cells"],
        ),
    ),
    (
        C.LONGEST_OPTION_CORRECT,
        True,
        q("What does a catalyst do?", ["Raises yield", "Lowers the activation energy of the reaction", "Adds heat", "Stops it"], 1),
    ),
    (
        C.LONGEST_OPTION_CORRECT,
        True,
        q("What is osmosis?", ["Diffusion", "Movement of water across a semipermeable membrane", "Boiling", "Melting"], 1),
    ),
    (C.LONGEST_OPTION_CORRECT, False, q("Pick the even number.", ["22", "31", "45", "57"])),
    (C.LONGEST_OPTION_CORRECT, False, q("Pick the metal.", ["Iron", "Neon", "Xeon", "Ozon"])),
    (C.LONGEST_OPTION_CORRECT, False, q(GAS, ["Nitrogen", "Hydrogen", "Argon", "Helium"])),
    (C.LONGEST_OPTION_CORRECT, False, q(GAS, ["Nitrogen", "Oxygen", "Argon", "Carbon dioxide"])),
    # true_false_question
    (C.TRUE_FALSE_QUESTION, True, q("Water boils at 100 degrees Celsius at sea level.", ["True", "False"])),
    (C.TRUE_FALSE_QUESTION, True, q("Is the Earth round?", ["Yes", "No"])),
    (C.TRUE_FALSE_QUESTION, True, q("What does adding a strong base do?", ["It increases pH", "It does not increase pH", "It boils", "It freezes"])),
    (C.TRUE_FALSE_QUESTION, True, q("Is mercury a liquid metal?", ["T", "F"])),
    (C.TRUE_FALSE_QUESTION, False, q("What is the capital of Italy?", ["Paris", "Rome", "Lyon", "Nice"], 1)),
    (C.TRUE_FALSE_QUESTION, False, q(GAS, GAS_OPTIONS)),
    (C.TRUE_FALSE_QUESTION, False, q("What does adding a strong base do?", ["It increases pH", "It decreases pH", "It boils", "It freezes"])),
    (C.TRUE_FALSE_QUESTION, False, q("Which statement is true of enzymes?", ["True catalysts", "False proteins", "Lipids", "Sugars"])),
    # absolute_terms
    (C.ABSOLUTE_TERMS, True, q("What happens to pressure as temperature rises?", ["It always increases", "It drops", "It is unchanged", "It oscillates"])),
    (C.ABSOLUTE_TERMS, True, q("Which describes enzymes?", ["Proteins", "They never denature", "Lipids", "Sugars"])),
    (C.ABSOLUTE_TERMS, True, q("Which is true of photosynthesis?", ["Only plants do it", "It releases oxygen", "It needs ammonia", "It happens at night"], 1)),
    (C.ABSOLUTE_TERMS, False, q("What happens to pressure as temperature rises?", ["It generally increases", "It drops", "It is unchanged", "It oscillates"])),
    (C.ABSOLUTE_TERMS, False, q("Which process always releases oxygen?", ["Photosynthesis", "Respiration", "Fermentation", "Digestion"])),
    (C.ABSOLUTE_TERMS, False, q(GAS, ["Nitrogen", "Oxygen", "Argon", "None of the above"])),
    (C.ABSOLUTE_TERMS, False, q(GAS, ["Nitrogen", "Oxygen", "Argon", "All of the above"])),
    # vague_terms
    (C.VAGUE_TERMS, True, q("How does the drug act?", ["It usually binds", "It blocks channels", "It dissolves", "It oxidizes"])),
    (C.VAGUE_TERMS, True, q("When do eclipses happen?", ["Every day", "Occasionally, when orbits align", "At noon", "Never"], 1)),
    (C.VAGUE_TERMS, True, q("How do volcanoes behave?", ["They often erupt", "They sleep", "They float", "They freeze"])),
    (C.VAGUE_TERMS, False, q("How does the drug act?", ["It binds in 80% of trials", "It blocks channels", "It dissolves", "It oxidizes"])),
    (C.VAGUE_TERMS, False, q("Which symptom often appears first?", ["Fever", "Rash", "Cough", "Fatigue"])),
    (C.VAGUE_TERMS, False, q(GAS, GAS_OPTIONS)),
    # negative_worded
    (C.NEGATIVE_WORDED, True, q("Which is NOT a noble gas?", ["Chlorine", "Neon", "Argon", "Helium"])),
    (C.NEGATIVE_WORDED, True, q("All of the following are mammals EXCEPT", ["Shark", "Whale", "Bat", "Dog"])),
    (C.NEGATIVE_WORDED, True, q("Which statement is incorrect?", ["Ice sinks", "Ice floats", "Water is wet", "Steam is hot"])),
    (C.NEGATIVE_WORDED, True, q("Which element cannot form ions?", ["Neon", "Sodium", "Chlorine", "Calcium"])),
    (C.NEGATIVE_WORDED, False, q("Which is a noble gas?", ["Neon", "Chlorine", "Sodium", "Iron"])),
    (C.NEGATIVE_WORDED, False, q("Which gas is inert?", ["Neon", "Not chlorine", "Not fluorine", "Oxygen"])),
    (C.NEGATIVE_WORDED, False, q("Choose the best answer: none of the above is wrong here?", ["Yes", "Maybe", "Perhaps", "Unclear"])),
    # fill_in_blank
    (C.FILL_IN_BLANK, True, q("The ____ is the powerhouse of the cell.", ["mitochondrion", "nucleus", "ribosome", "vacuole"])),
    (C.FILL_IN_BLANK, True, q("Water is made of [blank] and oxygen.", ["hydrogen", "helium", "carbon", "neon"])),
    (C.FILL_IN_BLANK, True, q("In 1492, ... sailed across the Atlantic.", ["Columbus", "Magellan", "Cook", "Drake"])),
    (C.FILL_IN_BLANK, False, q("The powerhouse of the cell is the ____.", ["mitochondrion", "nucleus", "ribosome", "vacuole"])),
    (C.FILL_IN_BLANK, False, q("The powerhouse of the cell is the ...", ["mitochondrion", "nucleus", "ribosome", "vacuole"])),
    (C.FILL_IN_BLANK, False, q(GAS, GAS_OPTIONS)),
    (C.FILL_IN_BLANK, False, q("The variable my_var_name holds what?", ["A string", "A list", "A number", "A dict"])),
    # complex_k_type
    (C.COMPLEX_K_TYPE, True, q("Which are primary colors?", ["Red", "Green", "Blue", "Both A and C"], 3)),
    (C.COMPLEX_K_TYPE, True, q("Which are prime numbers? 1) 2 2) 4 3) 5", ["1 and 3 only", "2 only", "3 only", "1 only"])),
    (C.COMPLEX_K_TYPE, True, q("Which are gases at room temperature?", ["Neon", "Iron", "Argon", "All except B"], 3)),
    (C.COMPLEX_K_TYPE, True, q("Which are gases at room temperature?", ["Neon", "Iron", "Argon", "A and C"], 3)),
    (C.COMPLEX_K_TYPE, False, q(GAS, GAS_OPTIONS)),
    (C.COMPLEX_K_TYPE, False, q("Which pair forms water?", ["Hydrogen and oxygen", "Carbon and neon", "Iron and zinc", "Gold and tin"])),
    (C.COMPLEX_K_TYPE, False, q("Which vitamin deficiency causes scurvy?", ["Vitamin C", "Vitamin A", "Vitamin B", "Vitamin D"])),
    # lost_sequence
    (C.LOST_SEQUENCE, True, q("How many moons does Mars have?", ["5", "2", "9", "1"], 1)),
    (C.LOST_SEQUENCE, True, q("When did World War II end?", ["1945", "1918", "1939", "1950"])),
    (C.LOST_SEQUENCE, True, q("What is the boiling point of water?", ["100 °C", "50 °C", "150 °C", "0 °C"])),
    (C.LOST_SEQUENCE, False, q("How many moons does Mars have?", ["1", "2", "5", "9"], 1)),
    (C.LOST_SEQUENCE, False, q("How many moons does Mars have?", ["9", "5", "2", "1"], 2)),
    (C.LOST_SEQUENCE, False, q("How many moons does Mars have?", ["1", "2", "banana", "9"], 1)),
    (C.LOST_SEQUENCE, False, q(GAS, GAS_OPTIONS)),
    # word_repeats
    (
        C.WORD_REPEATS,
        True,
        q("Which process uses photosynthesis pigments?", ["Photosynthesis in chloroplasts", "Respiration", "Fermentation", "Digestion"]),
    ),
    (C.WORD_REPEATS, True, q("Which organelle contains the cell nucleus?", ["The nucleus envelope", "Ribosome", "Golgi body", "Vacuole"])),
    (C.WORD_REPEATS, True, q("What does an enzyme catalyze?", ["Catalyzed reactions", "Magnets", "Rocks", "Light"])),
    (
        C.WORD_REPEATS,
        False,
        q("Which process uses photosynthesis pigments?", ["Photosynthesis in chloroplasts", "Photosynthesis in roots", "Fermentation", "Digestion"]),
    ),
    (C.WORD_REPEATS, False, q(GAS, GAS_OPTIONS)),
    (C.WORD_REPEATS, False, q("Which organelle makes proteins?", ["Ribosome", "Lysosome", "Vacuole", "Centriole"])),
    # convergence_cues
    (
        C.CONVERGENCE_CUES,
        True,
        q("What does heating a sealed gas do?", ["Raises temperature and pressure", "Raises temperature only", "Raises pressure only", "Lowers volume"]),
    ),
    (
        C.CONVERGENCE_CUES,
        True,
        q("Which organs filter blood?", ["Kidney and liver", "Kidney and heart", "Liver and lung", "Brain and skin"]),
    ),
    (
        C.CONVERGENCE_CUES,
        True,
        q("Which describes the Sun?", ["Hot yellow star", "Hot planet", "Yellow moon", "Star cluster"]),
    ),
    (C.CONVERGENCE_CUES, False, q(GAS, GAS_OPTIONS)),
    (
        C.CONVERGENCE_CUES,
        False,
        q("What does heating a sealed gas do?", ["Raises temperature only", "Raises temperature and pressure", "Raises pressure only", "Lowers volume"]),
    ),
    (C.CONVERGENCE_CUES, False, q("Pick a color.", ["Red", "Blue", "Green", "Yellow"])),
    # grammatical_cues
    (C.GRAMMATICAL_CUES, True, q("Rust is an", ["oxide", "metal", "gas", "liquid"])),
    (C.GRAMMATICAL_CUES, True, q("The heart's lower chambers are", ["ventricles", "a valve", "an artery", "a vein"])),
    (C.GRAMMATICAL_CUES, True, q("Which of these organelles are found in plant cells?", ["Chloroplasts", "A centriole", "A flagellum", "A cilium"])),
    (C.GRAMMATICAL_CUES, True, q("A leaf's green color comes from", ["chlorophyll.", "Carotene", "Xanthophyll", "Anthocyanin"])),
    (C.GRAMMATICAL_CUES, False, q("Rust is an", ["oxide", "alloy", "element", "ion"])),
    (C.GRAMMATICAL_CUES, False, q(GAS, GAS_OPTIONS)),
    (C.GRAMMATICAL_CUES, False, q("The heart's upper chambers are", ["atria", "valves", "arteries", "veins"])),
    # unfocused_stem
    (C.UNFOCUSED_STEM, True, q("Which of the following is true?", ["Ice floats", "Ice sinks", "Ice burns", "Ice sings"])),
    (C.UNFOCUSED_STEM, True, q("Statistics?", ["Mean", "Median", "Mode", "Range"])),
    (C.UNFOCUSED_STEM, True, q("Which statement is correct?", ["Cats bark", "Dogs bark", "Fish bark", "Birds bark"], 1)),
    (C.UNFOCUSED_STEM, False, q(GAS, GAS_OPTIONS)),
    (C.UNFOCUSED_STEM, False, q("Which of the following gases is inert at room temperature?", ["Neon", "Oxygen", "Fluorine", "Chlorine"])),
    (C.UNFOCUSED_STEM, False, q("What is the derivative of sine?", ["Cosine", "Tangent", "Secant", "Negative sine"])),
    # gratuitous_information
    (
        C.GRATUITOUS_INFORMATION,
        True,
        q(
            "My grandmother loved gardening on sunny afternoons. Which gas is most abundant in Earth's atmosphere?",
            GAS_OPTIONS,
        ),
    ),
    (
        C.GRATUITOUS_INFORMATION,
        True,
        q("Yesterday it rained heavily in Paris. What is the derivative of sine?", ["Cosine", "Tangent", "Secant", "Negative sine"]),
    ),
    (
        C.GRATUITOUS_INFORMATION,
        True,
        q(
            "Football fans cheered loudly. The stadium was full. What is the chemical symbol for gold?",
            ["Au", "Ag", "Fe", "Pb"],
        ),
    ),
    (C.GRATUITOUS_INFORMATION, False, q(GAS, GAS_OPTIONS)),
    (
        C.GRATUITOUS_INFORMATION,
        False,
        q("Air is a mixture of gases. Which gas is most abundant in Earth's atmosphere?", GAS_OPTIONS),
    ),
    (
        C.GRATUITOUS_INFORMATION,
        False,
        q("A solution contains sodium chloride. Which ion carries a negative charge?", ["Chloride", "Sodium", "Proton", "Neutron"]),
    ),
    # logical_cues (every shared word also occurs in some distractor, so these are not word repeats)
    (
        C.LOGICAL_CUES,
        True,
        q("Which pump moves oxygenated blood?", ["A pump moving oxygenated blood", "A pump", "Moving water", "Oxygenated air", "Blood cells"]),
    ),
    (
        C.LOGICAL_CUES,
        True,
        q("What do green plants absorb from sunlight?", ["Green plants absorb sunlight", "Green paint", "Plants", "Absorb sunlight"]),
    ),
    (
        C.LOGICAL_CUES,
        True,
        q("How does a magnet attract iron filings?", ["A magnet attracts iron filings", "A magnet", "Iron ore", "It attracts filings"]),
    ),
    (C.LOGICAL_CUES, False, q(GAS, GAS_OPTIONS)),
    (
        C.LOGICAL_CUES,
        False,
        q("What does the heart pump through blood vessels?", ["Blood", "Blood plasma", "Bile", "Lymph"]),
    ),
    (C.LOGICAL_CUES, False, q("Pick a color.", ["Red", "Blue", "Green", "Yellow"])),
    # overlap made only of words unique to the key is a word repeat, not a logical cue
    (
        C.LOGICAL_CUES,
        False,
        q("What does the heart pump through blood vessels?", ["Blood through vessels", "Air", "Bile", "Lymph"]),
    ),
    # ambiguous_information
    (C.AMBIGUOUS_INFORMATION, True, q("Mitochondria because energy?", ["ATP", "DNA", "RNA", "NAD"])),
    (C.AMBIGUOUS_INFORMATION, True, q("It (the one from before for the reaction", ["Heat", "Cold", "Light", "Sound"])),
    (C.AMBIGUOUS_INFORMATION, True, q("They the largest planet", ["Jupiter", "Mars", "Venus", "Earth"])),
    (C.AMBIGUOUS_INFORMATION, False, q(GAS, GAS_OPTIONS)),
    (C.AMBIGUOUS_INFORMATION, False, q("What is the derivative of sine?", ["Cosine", "Tangent", "Secant", "Negative sine"])),
    (C.AMBIGUOUS_INFORMATION, False, q("The mitochondrion produces which molecule?", ["ATP", "DNA", "RNA", "NAD"])),
    # implausible_distractors
    (
        C.IMPLAUSIBLE_DISTRACTORS,
        True,
        q("How many moles of oxygen react with two moles of hydrogen?", ["One mole of oxygen", "Two moles of oxygen", "banana", "Three moles"]),
    ),
    (C.IMPLAUSIBLE_DISTRACTORS, True, q("What is the molar mass of water in grams per mole?", ["18 grams", "?", "20 grams", "16 grams"])),
    (C.IMPLAUSIBLE_DISTRACTORS, True, q("Which acid is found in the stomach?", ["Hydrochloric acid", "Sulfuric acid", "Nitric acid", "Pizza"])),
    (C.IMPLAUSIBLE_DISTRACTORS, False, q("What is 12 times 12?", ["144", "124", "142", "3"])),
    (C.IMPLAUSIBLE_DISTRACTORS, False, q("Which acid is found in the stomach?", ["Hydrochloric acid", "Sulfuric acid", "Nitric acid", "Acetic acid"])),
    (C.IMPLAUSIBLE_DISTRACTORS, False, q("Which gas is the most abundant gas in air?", ["Nitrogen gas", "Oxygen gas", "Argon gas", "Neon gas"])),
    # more_than_one_correct
    (C.MORE_THAN_ONE_CORRECT, True, q(GAS, ["Nitrogen", "Oxygen", "Nitrogen", "Argon"])),
    (C.MORE_THAN_ONE_CORRECT, True, q(GAS, ["Nitrogen gas", "Oxygen", "nitrogen gases", "Argon"])),
    (C.MORE_THAN_ONE_CORRECT, True, q(GAS, ["Nitrogen.", "Oxygen", "Argon", "  nitrogen "])),
    (C.MORE_THAN_ONE_CORRECT, False, q(GAS, GAS_OPTIONS)),
    (C.MORE_THAN_ONE_CORRECT, False, q(GAS, ["Nitrogen", "Nitrogen dioxide", "Oxygen", "Argon"])),
    (C.MORE_THAN_ONE_CORRECT, False, q("Pick a color.", ["Red", "Blue", "Green", "Yellow"])),
]
