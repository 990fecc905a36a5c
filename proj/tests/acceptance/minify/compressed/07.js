var t=function(){function t(t,s){this.rows=t,this.columns=s,this.cells=new Array(t*s).fill(0)}return t.prototype.get=function(t,s){return this.cells[t*this.columns+s]},t.prototype.set=function(t,s,o){return this.cells[t*this.columns+s]=o,this},t.prototype.multiply=function(s){for(var o=new t(this.rows,s.columns),r=0;r<this.rows;r++)for(var n=0;n<s.columns;n++){for(var i=0,e=0;e<this.columns;e++)i+=this.get(r,e)*s.get(e,n);o.set(r,n,i)}return o},t}();
