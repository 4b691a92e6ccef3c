if (condition instanceof LogicNegationNode) {
    LogicNegationNode negated = (LogicNegationNode) condition;
    // veriopt: NegateCond: ((!c) ? t : f) |-> (c ? f : t)
    return ConditionalNode.create(negated.getValue(), falseValue, trueValue, view);
}
if (condition instanceof LogicConstantNode) {
    LogicConstantNode c = (LogicConstantNode) condition;
    if (c.getValue()) {
        // veriopt: TrueCond: (true ? t : f) |-> t
        return trueValue;
    } else {
        // veriopt: TrueCond: (false ? t : f) |-> f
        return falseValue;
    }
}
