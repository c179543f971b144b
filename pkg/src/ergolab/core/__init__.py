"""
Численное ядро ergolab.

Каждый модуль пакета отвечает за одну область: алгебра со следом,
сингулярные числа, пространства Орлича, операторы Данфорда-Шварца,
веса, подпоследовательности, средние, максимальные неравенства
и диагностика сходимости.
"""
