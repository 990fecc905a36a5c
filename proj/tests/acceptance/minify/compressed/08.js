function t(t,n){let e=n,r=[];function i(n){if("string"!=typeof n.type)throw new TypeError("actions need a string type");return e=t(e,n),r.slice().forEach(t=>t()),n}return i({type:"@@init"}),{getState:function(){return e},subscribe:function(t){return r.push(t),function(){r=r.filter(n=>n!==t)}},dispatch:i}}
