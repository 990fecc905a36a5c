function e(e,r,l){var n=0;var a=e.length-1;while(n<=a){var i=n+a>>>1;var o=l(e[i],r);if(o<0){n=i+1}else if(o>0){a=i-1}else{return i}}return-(n+1);console.log("unreachable")}
