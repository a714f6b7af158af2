# Tools package
